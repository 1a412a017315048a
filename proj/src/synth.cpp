#include "synth.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace tsc {
namespace {

void add_bump(std::vector<double>& signal, double center, double sigma, double amp) {
    int lo = std::max(0, int(std::floor(center - 5.0 * sigma)));
    int hi = std::min(int(signal.size()) - 1, int(std::ceil(center + 5.0 * sigma)));
    for (int i = lo; i <= hi; ++i) {
        double t = (i - center) / sigma;
        signal[i] += amp * std::exp(-0.5 * t * t);
    }
}

}  // namespace

Dataset generate_synthetic(const SyntheticConfig& cfg) {
    if (cfg.count < 1) fail_invalid("synthetic count must be >= 1");
    if (cfg.channels < 1 || cfg.length < 2) fail_invalid("synthetic shape must be at least 1x2");
    if (!(cfg.sampling_rate > 0.0)) fail_invalid("synthetic sampling rate must be positive");
    if (!(cfg.heart_rate_low > 0.0) || cfg.heart_rate_high < cfg.heart_rate_low)
        fail_invalid("heart rate range must satisfy 0 < low <= high");
    if (cfg.anomaly_fraction < 0.0 || cfg.anomaly_fraction > 1.0)
        fail_invalid("anomaly fraction must lie in [0, 1]");

    constexpr double pi = std::numbers::pi;
    Rng master(cfg.seed);
    Rng mix_rng = master.split(1);

    // One mixing profile per dataset keeps channels strongly correlated.
    std::vector<double> gain(cfg.channels);
    for (int c = 0; c < cfg.channels; ++c) {
        double g = mix_rng.uniform(0.4, 1.3);
        if (mix_rng.uniform() < 0.25) g = -g;
        gain[c] = g;
    }

    Dataset ds;
    ds.records.reserve(cfg.count);
    std::vector<double> latent(cfg.length);
    for (int r = 0; r < cfg.count; ++r) {
        bool anomaly = std::floor((r + 1) * cfg.anomaly_fraction) >
                       std::floor(double(r) * cfg.anomaly_fraction);
        Rng rng = master.split(uint64_t(r) + 2);

        double bpm = rng.uniform(cfg.heart_rate_low, cfg.heart_rate_high);
        double period = cfg.sampling_rate * 60.0 / bpm;
        double phase = rng.uniform(0.0, period);
        double drift_phase = rng.uniform(0.0, 2.0 * pi);

        for (int i = 0; i < cfg.length; ++i)
            latent[i] = 0.05 * std::sin(2.0 * pi * 0.25 * i / cfg.sampling_rate + drift_phase);

        double qrs_amp = anomaly ? -1.0 : 1.0;
        double qrs_sigma = (anomaly ? 2.5 : 1.0) * 0.018 * period;
        int beats = int(std::ceil(cfg.length / period)) + 2;
        for (int k = -1; k < beats; ++k) {
            double center = phase + k * period + rng.uniform(-0.02 * period, 0.02 * period);
            add_bump(latent, center - 0.17 * period, 0.035 * period, 0.16);  // P
            add_bump(latent, center, qrs_sigma, qrs_amp);                    // QRS
            add_bump(latent, center + 0.22 * period, 0.055 * period, 0.31);  // T
        }

        Record rec;
        rec.id = "rec" + std::to_string(r);
        rec.channels = cfg.channels;
        rec.length = cfg.length;
        rec.sampling_rate = cfg.sampling_rate;
        rec.label = anomaly ? Label::Anomaly : Label::Normal;
        rec.samples.resize(size_t(cfg.channels) * cfg.length);
        for (int c = 0; c < cfg.channels; ++c)
            for (int i = 0; i < cfg.length; ++i)
                rec.at(c, i) = gain[c] * latent[i] + 0.01 * rng.normal();
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

}  // namespace tsc
