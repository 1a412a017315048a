#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "record.hpp"
#include "rng.hpp"

namespace tsc {

struct NoiseSpec {
    double variance_ratio = 0.0;  // fraction of per-channel signal variance, in [0, 1)
    uint64_t seed = 0;
};

// Per-channel z-score over the whole dataset. Fails on a zero-variance channel.
std::pair<Dataset, StandardizationStats> standardize(const Dataset& dataset);
Dataset standardize_with(const Dataset& dataset, const StandardizationStats& stats);
Dataset unstandardize(const Dataset& dataset, const StandardizationStats& stats);

// Output length of resample(); shared so callers can predict it exactly.
int resample_length(int length, double src_rate, double target_rate);
// Linear interpolation on the uniform time grid; endpoints preserved.
Record resample(const Record& record, double target_rate);

Record crop(const Record& record, int offset, int crop_len);
Record random_crop(const Record& record, int crop_len, Rng& rng);

// Evenly spaced window starts covering [0, length).
std::vector<int> tile_offsets(int length, int crop_len, int count);

// Adds white Gaussian noise with per-channel variance = ratio * channel variance.
Record add_noise(const Record& record, const NoiseSpec& spec);
Dataset add_noise(const Dataset& dataset, double variance_ratio, uint64_t seed);

}  // namespace tsc
