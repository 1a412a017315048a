#include "wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "errors.hpp"

namespace tsc {
namespace {

std::span<const double> filter_low(WaveletFamily family) {
    static const double haar[2] = {std::sqrt(0.5), std::sqrt(0.5)};
    static const double db4[4] = {
        (1.0 + std::sqrt(3.0)) / (4.0 * std::sqrt(2.0)),
        (3.0 + std::sqrt(3.0)) / (4.0 * std::sqrt(2.0)),
        (3.0 - std::sqrt(3.0)) / (4.0 * std::sqrt(2.0)),
        (1.0 - std::sqrt(3.0)) / (4.0 * std::sqrt(2.0)),
    };
    return family == WaveletFamily::Haar ? std::span<const double>(haar)
                                         : std::span<const double>(db4);
}

std::vector<double> filter_high(WaveletFamily family) {
    auto h = filter_low(family);
    std::vector<double> g(h.size());
    for (size_t j = 0; j < h.size(); ++j)
        g[j] = (j % 2 == 0 ? 1.0 : -1.0) * h[h.size() - 1 - j];
    return g;
}

void check_spec(const WaveletSpec& spec, int length) {
    if (spec.levels < 1) fail_invalid("wavelet levels must be >= 1");
    int limit = max_levels(length, spec.family);
    if (spec.levels > limit)
        fail_invalid("wavelet depth " + std::to_string(spec.levels) + " too deep for length " +
                     std::to_string(length) + " (max " + std::to_string(limit) + ")");
}

int detail_offset(int padded, int level) { return padded >> level; }
int detail_length(int padded, int level) { return padded >> level; }

}  // namespace

// floor(log2(length / (filter_len - 1)))
int max_levels(int length, WaveletFamily family) {
    int64_t support = family == WaveletFamily::Haar ? 1 : 3;
    int levels = 0;
    while (support << (levels + 1) <= length) ++levels;
    return levels;
}

int auto_levels(int length, WaveletFamily family) {
    int limit = max_levels(length, family);
    int twos = 0;
    int m = length;
    while (m % 2 == 0) {
        m /= 2;
        ++twos;
    }
    if (twos >= 3) return std::min(twos, limit);
    return limit;
}

int padded_length(int length, int levels) {
    int block = 1 << levels;
    return (length + block - 1) / block * block;
}

std::span<const double> CoefficientTree::approx(int c) const {
    return {coeffs.data() + size_t(c) * padded_length, size_t(approx_length())};
}

std::span<const double> CoefficientTree::detail(int c, int level) const {
    if (level < 1 || level > spec.levels) fail_invalid("detail level out of range");
    return {coeffs.data() + size_t(c) * padded_length + detail_offset(padded_length, level),
            size_t(detail_length(padded_length, level))};
}

void CoefficientTree::validate() const {
    if (channels < 1 || original_length < 2) fail_invalid("coefficient tree has empty shape");
    check_spec(spec, original_length);
    if (padded_length != tsc::padded_length(original_length, spec.levels))
        fail_invalid("coefficient tree padded length does not match spec");
    if (coeffs.size() != size_t(channels) * padded_length)
        fail_invalid("coefficient tree buffer does not match channels * padded length");
}

CoefficientTree dwt_forward(const Record& record, const WaveletSpec& spec) {
    check_spec(spec, record.length);
    auto h = filter_low(spec.family);
    std::vector<double> g = filter_high(spec.family);
    int taps = int(h.size());
    int padded = padded_length(record.length, spec.levels);

    CoefficientTree tree;
    tree.spec = spec;
    tree.id = record.id;
    tree.channels = record.channels;
    tree.original_length = record.length;
    tree.padded_length = padded;
    tree.sampling_rate = record.sampling_rate;
    tree.coeffs.assign(size_t(record.channels) * padded, 0.0);

    std::vector<double> cur(padded), next(padded / 2);
    for (int c = 0; c < record.channels; ++c) {
        auto src = record.channel(c);
        std::copy(src.begin(), src.end(), cur.begin());
        std::fill(cur.begin() + record.length, cur.begin() + padded, 0.0);
        double* block = tree.coeffs.data() + size_t(c) * padded;
        int m = padded;
        for (int level = 1; level <= spec.levels; ++level) {
            int half = m / 2;
            double* detail = block + detail_offset(padded, level);
            for (int i = 0; i < half; ++i) {
                double a = 0.0, d = 0.0;
                for (int j = 0; j < taps; ++j) {
                    double v = cur[(2 * i + j) % m];
                    a += h[j] * v;
                    d += g[j] * v;
                }
                next[i] = a;
                detail[i] = d;
            }
            std::copy(next.begin(), next.begin() + half, cur.begin());
            m = half;
        }
        std::copy(cur.begin(), cur.begin() + m, block);
    }
    return tree;
}

Record dwt_inverse(const CoefficientTree& tree) {
    tree.validate();
    auto h = filter_low(tree.spec.family);
    std::vector<double> g = filter_high(tree.spec.family);
    int taps = int(h.size());
    int padded = tree.padded_length;

    Record out;
    out.id = tree.id;
    out.channels = tree.channels;
    out.length = tree.original_length;
    out.sampling_rate = tree.sampling_rate;
    out.samples.resize(size_t(tree.channels) * tree.original_length);

    std::vector<double> cur(padded), next(padded);
    for (int c = 0; c < tree.channels; ++c) {
        const double* block = tree.coeffs.data() + size_t(c) * padded;
        int m = tree.approx_length();
        std::copy(block, block + m, cur.begin());
        for (int level = tree.spec.levels; level >= 1; --level) {
            const double* detail = block + detail_offset(padded, level);
            int full = m * 2;
            std::fill(next.begin(), next.begin() + full, 0.0);
            for (int i = 0; i < m; ++i) {
                double a = cur[i];
                double d = detail[i];
                for (int j = 0; j < taps; ++j) next[(2 * i + j) % full] += h[j] * a + g[j] * d;
            }
            std::copy(next.begin(), next.begin() + full, cur.begin());
            m = full;
        }
        std::copy(cur.begin(), cur.begin() + tree.original_length,
                  out.samples.begin() + size_t(c) * tree.original_length);
    }
    return out;
}

EnergyProfile energy_profile(const Dataset& dataset, const WaveletSpec& spec) {
    dataset.validate();
    EnergyProfile profile;
    profile.dataset_size = dataset.count();
    bool first = true;
    for (const Record& rec : dataset.records) {
        CoefficientTree tree = dwt_forward(rec, spec);
        if (first) {
            profile.mean_abs.assign(tree.coeffs.size(), 0.0);
            first = false;
        }
        for (size_t p = 0; p < tree.coeffs.size(); ++p)
            profile.mean_abs[p] += std::abs(tree.coeffs[p]);
    }
    double inv = 1.0 / profile.dataset_size;
    for (double& v : profile.mean_abs) v *= inv;
    return profile;
}

namespace {

SelectionMask top_n_mask(std::span<const double> score, int n) {
    int total = int(score.size());
    if (n < 1 || n > total) fail_invalid("selection size must lie in [1, total coefficients]");
    std::vector<int> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::nth_element(order.begin(), order.begin() + (n - 1), order.end(), [&](int a, int b) {
        if (score[a] != score[b]) return score[a] > score[b];
        return a < b;
    });
    SelectionMask mask;
    mask.n = n;
    mask.kept_positions.assign(order.begin(), order.begin() + n);
    std::sort(mask.kept_positions.begin(), mask.kept_positions.end());
    return mask;
}

}  // namespace

SelectionMask global_mask(const EnergyProfile& profile, int n) {
    return top_n_mask(profile.mean_abs, n);
}

SelectionMask oracle_mask(const CoefficientTree& tree, int n) {
    std::vector<double> mag(tree.coeffs.size());
    for (size_t p = 0; p < mag.size(); ++p) mag[p] = std::abs(tree.coeffs[p]);
    return top_n_mask(mag, n);
}

CoefficientTree apply_mask(const CoefficientTree& tree, const SelectionMask& mask) {
    CoefficientTree out = tree;
    std::fill(out.coeffs.begin(), out.coeffs.end(), 0.0);
    for (int p : mask.kept_positions) {
        if (p < 0 || p >= tree.total()) fail_invalid("selection mask position out of range");
        out.coeffs[p] = tree.coeffs[p];
    }
    return out;
}

CoefficientTree select_global(const CoefficientTree& tree, const EnergyProfile& profile, int n) {
    if (profile.mean_abs.size() != tree.coeffs.size())
        fail_invalid("energy profile does not match coefficient tree");
    return apply_mask(tree, global_mask(profile, n));
}

std::pair<CoefficientTree, SelectionMask> select_oracle(const CoefficientTree& tree, int n) {
    SelectionMask mask = oracle_mask(tree, n);
    return {apply_mask(tree, mask), mask};
}

CoefficientTree threshold(const CoefficientTree& tree, double lambda, ThresholdMode mode) {
    if (!(lambda >= 0.0)) fail_invalid("threshold must be >= 0");
    CoefficientTree out = tree;
    if (mode == ThresholdMode::Hard) {
        for (double& c : out.coeffs)
            if (std::abs(c) <= lambda) c = 0.0;
    } else {
        for (double& c : out.coeffs) {
            double mag = std::abs(c) - lambda;
            c = mag > 0.0 ? std::copysign(mag, c) : 0.0;
        }
    }
    return out;
}

WaveletCompression compress_reconstruct(const Record& record, const WaveletSpec& spec, int n,
                                        SelectionMethod method, const EnergyProfile* profile) {
    CoefficientTree tree = dwt_forward(record, spec);
    WaveletCompression result;
    if (method == SelectionMethod::Global) {
        if (!profile) fail_invalid("global selection requires an energy profile");
        if (profile->mean_abs.size() != tree.coeffs.size())
            fail_invalid("energy profile does not match coefficient tree");
        result.mask = global_mask(*profile, n);
    } else {
        result.mask = oracle_mask(tree, n);
    }
    result.reconstruction = dwt_inverse(apply_mask(tree, result.mask));
    result.kept = n;
    result.kept_fraction = double(n) / (double(record.channels) * record.length);
    double err = 0.0;
    for (size_t i = 0; i < record.samples.size(); ++i) {
        double d = record.samples[i] - result.reconstruction.samples[i];
        err += d * d;
    }
    result.mse = err / double(record.samples.size());
    return result;
}

Record tree_as_record(const CoefficientTree& tree) {
    tree.validate();
    Record out;
    out.id = tree.id;
    out.channels = tree.channels;
    out.length = tree.padded_length;
    out.sampling_rate = tree.sampling_rate > 0.0 ? tree.sampling_rate : 1.0;
    out.label = Label::Unknown;
    out.samples = tree.coeffs;
    return out;
}

}  // namespace tsc
