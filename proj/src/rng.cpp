#include "rng.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace tsc {

namespace {

uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {
    uint64_t x = seed ^ (0xda942042e4dd58b5ULL * (stream + 1));
    for (auto& s : state_) s = splitmix64(x);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

uint64_t Rng::next_u64() {
    uint64_t* s = state_;
    const uint64_t result = rotl(s[1] * 5, 7) * 9;
    const uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
}

double Rng::uniform() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

int64_t Rng::below(int64_t n) {
    if (n <= 0) fail_invalid("Rng::below: n must be positive");
    // Lemire multiply-shift; bias is < 2^-64 * n, negligible at our scales.
    return int64_t((static_cast<unsigned __int128>(next_u64()) * uint64_t(n)) >> 64);
}

double Rng::normal() {
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::split(uint64_t stream) const {
    // Children are keyed off the original (seed, stream) pair so nested
    // splits stay reproducible and independent of draw order.
    uint64_t x = stream_ ^ (stream * 0x9e3779b97f4a7c15ULL);
    return Rng(seed_, splitmix64(x));
}

}  // namespace tsc
