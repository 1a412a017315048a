#pragma once

#include <cstdint>

#include "record.hpp"

namespace tsc {

struct SyntheticConfig {
    int count = 64;
    int channels = 1;
    int length = 1000;
    double sampling_rate = 100.0;
    double heart_rate_low = 55.0;   // bpm
    double heart_rate_high = 95.0;  // bpm
    double anomaly_fraction = 0.0;
    uint64_t seed = 0;
};

// Deterministic pseudo-ECG: jittered P/QRS/T beat train at a per-record heart
// rate plus baseline wander; channels are fixed linear mixes of one latent
// train. Anomalous records invert and widen the QRS pulse.
Dataset generate_synthetic(const SyntheticConfig& config);

}  // namespace tsc
