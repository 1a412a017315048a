#pragma once

#include <cstdint>

namespace tsc {

// xoshiro256** seeded through splitmix64. Self-contained so that seeded runs
// reproduce bit-exactly regardless of the standard library in use.
class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0);

    uint64_t next_u64();

    // Uniform double in [0, 1), 53 bits of precision.
    double uniform();
    double uniform(double lo, double hi);

    // Uniform integer in [0, n); n must be positive.
    int64_t below(int64_t n);

    // Standard normal via Box-Muller; consumes two uniforms per draw.
    double normal();

    // Child generator on an independent stream, derived from the original
    // seed. Splitting never perturbs this generator's state.
    Rng split(uint64_t stream) const;

private:
    uint64_t state_[4];
    uint64_t seed_;
    uint64_t stream_;
};

}  // namespace tsc
