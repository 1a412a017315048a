#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tsc {

enum class Label : uint8_t { Normal = 0, Anomaly = 1, Unknown = 2 };

const char* to_string(Label label);
Label label_from_string(const std::string& text);  // throws on unknown text

// One multichannel time series. Samples are row-major (channel, sample) and
// dimensionless once standardized.
struct Record {
    std::string id;
    int channels = 0;
    int length = 0;
    double sampling_rate = 0.0;
    Label label = Label::Unknown;
    std::vector<double> samples;  // channels * length

    double at(int c, int i) const { return samples[size_t(c) * length + i]; }
    double& at(int c, int i) { return samples[size_t(c) * length + i]; }

    std::span<const double> channel(int c) const {
        return {samples.data() + size_t(c) * length, size_t(length)};
    }
    std::span<double> channel(int c) {
        return {samples.data() + size_t(c) * length, size_t(length)};
    }

    // channels >= 1, length >= 2, rate > 0, every sample finite.
    void validate() const;
};

// Ordered, shape-uniform collection of records.
struct Dataset {
    std::vector<Record> records;

    int count() const { return int(records.size()); }
    int channels() const;
    int length() const;
    double sampling_rate() const;

    // Non-empty and shape-uniform; validates each record.
    void validate() const;
};

// Per-channel affine transform captured by standardize() so it can be undone.
struct StandardizationStats {
    std::vector<double> mean;
    std::vector<double> stddev;
};

}  // namespace tsc
