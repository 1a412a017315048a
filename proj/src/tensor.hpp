#pragma once

#include <cstdint>
#include <vector>

namespace tsc {

// (batch, channels, length) row-major.
struct Tensor {
    int batch = 0;
    int channels = 0;
    int length = 0;
    std::vector<double> values;

    Tensor() = default;
    Tensor(int b, int c, int l) : batch(b), channels(c), length(l) {
        values.assign(size_t(b) * c * l, 0.0);
    }

    int64_t size() const { return int64_t(batch) * channels * length; }
    int64_t per_sample() const { return int64_t(channels) * length; }

    double at(int b, int c, int i) const {
        return values[(size_t(b) * channels + c) * length + i];
    }
    double& at(int b, int c, int i) { return values[(size_t(b) * channels + c) * length + i]; }

    const double* sample(int b) const { return values.data() + size_t(b) * per_sample(); }
    double* sample(int b) { return values.data() + size_t(b) * per_sample(); }

    void zero() { values.assign(values.size(), 0.0); }
};

}  // namespace tsc
