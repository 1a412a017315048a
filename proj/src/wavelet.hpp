#pragma once

#include <span>
#include <vector>

#include "record.hpp"

namespace tsc {

enum class WaveletFamily { Haar, Daubechies4 };
enum class BoundaryRule { PeriodicExtension };

struct WaveletSpec {
    WaveletFamily family = WaveletFamily::Daubechies4;
    int levels = 1;
    BoundaryRule boundary = BoundaryRule::PeriodicExtension;
};

// Deepest level count valid for a signal of this length.
int max_levels(int length, WaveletFamily family);
// Deepest level count that avoids padding when the length has enough factors
// of two (at least 3), otherwise max_levels with zero padding.
int auto_levels(int length, WaveletFamily family);
int padded_length(int length, int levels);

// Per-channel multi-level decomposition. Coefficients are stored flat per
// channel as [approx_L, detail_L, detail_{L-1}, ..., detail_1], channels
// concatenated; each channel block has padded_length entries.
struct CoefficientTree {
    WaveletSpec spec;
    std::string id;
    int channels = 0;
    int original_length = 0;
    int padded_length = 0;
    double sampling_rate = 0.0;
    std::vector<double> coeffs;

    int total() const { return channels * padded_length; }
    int approx_length() const { return padded_length >> spec.levels; }
    std::span<const double> approx(int c) const;
    std::span<const double> detail(int c, int level) const;

    void validate() const;
};

struct EnergyProfile {
    std::vector<double> mean_abs;  // one per flattened position
    int dataset_size = 0;
};

struct SelectionMask {
    std::vector<int> kept_positions;  // sorted flattened indices
    int n = 0;
};

CoefficientTree dwt_forward(const Record& record, const WaveletSpec& spec);
Record dwt_inverse(const CoefficientTree& tree);

EnergyProfile energy_profile(const Dataset& dataset, const WaveletSpec& spec);

// Mask of the n positions with the highest profile mean; ties to lower index.
SelectionMask global_mask(const EnergyProfile& profile, int n);
// Mask of the n largest-magnitude coefficients of this tree; ties to lower index.
SelectionMask oracle_mask(const CoefficientTree& tree, int n);
// Zeroes every coefficient outside the mask.
CoefficientTree apply_mask(const CoefficientTree& tree, const SelectionMask& mask);

CoefficientTree select_global(const CoefficientTree& tree, const EnergyProfile& profile, int n);
std::pair<CoefficientTree, SelectionMask> select_oracle(const CoefficientTree& tree, int n);

enum class ThresholdMode { Hard, Soft };
CoefficientTree threshold(const CoefficientTree& tree, double lambda, ThresholdMode mode);

enum class SelectionMethod { Global, Oracle };

struct WaveletCompression {
    Record reconstruction;
    SelectionMask mask;
    int kept = 0;
    double kept_fraction = 0.0;  // kept / (channels * original length)
    double mse = 0.0;
};

// Forward transform, selection, inverse transform; MSE against the input.
// Global selection requires a profile.
WaveletCompression compress_reconstruct(const Record& record, const WaveletSpec& spec, int n,
                                        SelectionMethod method,
                                        const EnergyProfile* profile = nullptr);

// Coefficients viewed as a record so trees can be dumped to dataset files.
Record tree_as_record(const CoefficientTree& tree);

}  // namespace tsc
