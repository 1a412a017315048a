#include "preprocess.hpp"

#include <cmath>

#include "errors.hpp"
#include "parallel.hpp"

namespace tsc {

std::pair<Dataset, StandardizationStats> standardize(const Dataset& dataset) {
    dataset.validate();
    int channels = dataset.channels();
    int length = dataset.length();
    int count = dataset.count();

    StandardizationStats stats;
    stats.mean.resize(channels);
    stats.stddev.resize(channels);
    std::vector<double> per_record(count);
    std::vector<double> tmp(length);
    for (int c = 0; c < channels; ++c) {
        for (int r = 0; r < count; ++r)
            per_record[r] = pairwise_sum(dataset.records[r].channel(c));
        double mean = pairwise_sum(per_record) / (double(count) * length);
        for (int r = 0; r < count; ++r) {
            auto ch = dataset.records[r].channel(c);
            for (int i = 0; i < length; ++i) {
                double d = ch[i] - mean;
                tmp[i] = d * d;
            }
            per_record[r] = pairwise_sum(tmp);
        }
        double sd = std::sqrt(pairwise_sum(per_record) / (double(count) * length));
        if (!(sd > 0.0))
            fail_numeric("channel " + std::to_string(c) + " has zero variance");
        stats.mean[c] = mean;
        stats.stddev[c] = sd;
    }
    return {standardize_with(dataset, stats), stats};
}

Dataset standardize_with(const Dataset& dataset, const StandardizationStats& stats) {
    if (stats.mean.size() != size_t(dataset.channels()) || stats.stddev.size() != stats.mean.size())
        fail_invalid("standardization stats do not match dataset channels");
    Dataset out = dataset;
    for (Record& rec : out.records) {
        for (int c = 0; c < rec.channels; ++c) {
            double mean = stats.mean[c];
            double inv = 1.0 / stats.stddev[c];
            for (int i = 0; i < rec.length; ++i) rec.at(c, i) = (rec.at(c, i) - mean) * inv;
        }
    }
    return out;
}

Dataset unstandardize(const Dataset& dataset, const StandardizationStats& stats) {
    if (stats.mean.size() != size_t(dataset.channels()) || stats.stddev.size() != stats.mean.size())
        fail_invalid("standardization stats do not match dataset channels");
    Dataset out = dataset;
    for (Record& rec : out.records) {
        for (int c = 0; c < rec.channels; ++c) {
            double mean = stats.mean[c];
            double sd = stats.stddev[c];
            for (int i = 0; i < rec.length; ++i) rec.at(c, i) = rec.at(c, i) * sd + mean;
        }
    }
    return out;
}

int resample_length(int length, double src_rate, double target_rate) {
    if (src_rate == target_rate) return length;
    return int(std::llround(double(length - 1) * target_rate / src_rate)) + 1;
}

Record resample(const Record& record, double target_rate) {
    if (!(target_rate > 0.0)) fail_invalid("target rate must be positive");
    if (record.sampling_rate == target_rate) return record;
    int out_len = resample_length(record.length, record.sampling_rate, target_rate);
    if (out_len < 2) fail_invalid("resample would produce fewer than 2 samples");

    Record out = record;
    out.length = out_len;
    out.sampling_rate = target_rate;
    out.samples.assign(size_t(record.channels) * out_len, 0.0);
    double scale = double(record.length - 1) / (out_len - 1);
    for (int c = 0; c < record.channels; ++c) {
        auto src = record.channel(c);
        for (int j = 0; j < out_len; ++j) {
            if (j == out_len - 1) {
                out.at(c, j) = src[record.length - 1];
                continue;
            }
            double p = j * scale;
            int i0 = std::min(int(p), record.length - 2);
            double frac = p - i0;
            out.at(c, j) = src[i0] * (1.0 - frac) + src[i0 + 1] * frac;
        }
    }
    return out;
}

Record crop(const Record& record, int offset, int crop_len) {
    if (crop_len < 1 || crop_len > record.length)
        fail_invalid("crop length must lie in [1, length]");
    if (offset < 0 || offset + crop_len > record.length)
        fail_invalid("crop window out of range");
    Record out;
    out.id = record.id;
    out.channels = record.channels;
    out.length = crop_len;
    out.sampling_rate = record.sampling_rate;
    out.label = record.label;
    out.samples.resize(size_t(record.channels) * crop_len);
    for (int c = 0; c < record.channels; ++c) {
        auto src = record.channel(c);
        for (int i = 0; i < crop_len; ++i) out.at(c, i) = src[offset + i];
    }
    return out;
}

Record random_crop(const Record& record, int crop_len, Rng& rng) {
    if (crop_len < 1 || crop_len > record.length)
        fail_invalid("crop length must lie in [1, length]");
    int offset = int(rng.below(record.length - crop_len + 1));
    return crop(record, offset, crop_len);
}

std::vector<int> tile_offsets(int length, int crop_len, int count) {
    if (count < 1) fail_invalid("tile count must be >= 1");
    if (crop_len < 1 || crop_len > length) fail_invalid("crop length must lie in [1, length]");
    std::vector<int> offsets(count, 0);
    if (count == 1) return offsets;
    if (double(length - crop_len) > double(crop_len) * (count - 1))
        fail_invalid("tiles cannot cover the signal: need larger windows or more of them");
    for (int i = 0; i < count; ++i)
        offsets[i] = int(std::llround(double(i) * (length - crop_len) / (count - 1)));
    return offsets;
}

Record add_noise(const Record& record, const NoiseSpec& spec) {
    if (!(spec.variance_ratio >= 0.0) || spec.variance_ratio >= 1.0)
        fail_invalid("variance ratio must lie in [0, 1)");
    if (spec.variance_ratio == 0.0) return record;
    Record out = record;
    Rng rng(spec.seed);
    std::vector<double> tmp(record.length);
    for (int c = 0; c < record.channels; ++c) {
        auto ch = record.channel(c);
        double mean = pairwise_sum(ch) / record.length;
        for (int i = 0; i < record.length; ++i) {
            double d = ch[i] - mean;
            tmp[i] = d * d;
        }
        double sd = std::sqrt(spec.variance_ratio * pairwise_sum(tmp) / record.length);
        for (int i = 0; i < record.length; ++i) out.at(c, i) += sd * rng.normal();
    }
    return out;
}

Dataset add_noise(const Dataset& dataset, double variance_ratio, uint64_t seed) {
    Rng base(seed);
    Dataset out;
    out.records.reserve(dataset.records.size());
    for (const Record& rec : dataset.records)
        out.records.push_back(add_noise(rec, NoiseSpec{variance_ratio, base.next_u64()}));
    return out;
}

}  // namespace tsc
