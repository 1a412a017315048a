#include "bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

#include "errors.hpp"
#include "fpca.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace tsc {

const char* to_string(Method method) {
    switch (method) {
        case Method::Vae: return "VAE";
        case Method::WaveletGlobal: return "WaveletGlobal";
        case Method::WaveletOracle: return "WaveletOracle";
        case Method::Fpca: return "FPCA";
    }
    fail_invalid("unknown method value");
}

Method method_from_string(const std::string& text) {
    if (text == "VAE" || text == "vae") return Method::Vae;
    if (text == "WaveletGlobal" || text == "global") return Method::WaveletGlobal;
    if (text == "WaveletOracle" || text == "oracle") return Method::WaveletOracle;
    if (text == "FPCA" || text == "fpca") return Method::Fpca;
    fail_invalid("unknown method '" + text + "' (expected vae, global, oracle, or fpca)");
}

const char* to_string(NoiseRegime regime) {
    switch (regime) {
        case NoiseRegime::CleanTrainCleanTest: return "CleanTrainCleanTest";
        case NoiseRegime::CleanTrainNoisyTest: return "CleanTrainNoisyTest";
        case NoiseRegime::NoisyTrainNoisyTest: return "NoisyTrainNoisyTest";
    }
    fail_invalid("unknown noise regime value");
}

double ConfusionMatrix::anomaly_recall() const {
    return tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0;
}

double ConfusionMatrix::normal_recall() const {
    return tn + fp > 0 ? double(tn) / double(tn + fp) : 0.0;
}

double ConfusionMatrix::balanced_accuracy() const {
    return (anomaly_recall() + normal_recall()) / 2.0;
}

std::array<double, 2> ConfusionMatrix::anomaly_row() const {
    double r = anomaly_recall();
    return {100.0 * r, 100.0 * (tp + fn > 0 ? 1.0 - r : 0.0)};
}

std::array<double, 2> ConfusionMatrix::normal_row() const {
    double r = normal_recall();
    return {100.0 * r, 100.0 * (tn + fp > 0 ? 1.0 - r : 0.0)};
}

int budget_for_fraction(double fraction, int channels, int length) {
    if (channels < 1 || length < 1) fail_invalid("budget needs positive channels and length");
    if (!(fraction > 0.0) || fraction > 1.0)
        fail_invalid("kept fraction must be in (0, 1], got " + format_double(fraction));
    int64_t total = int64_t(channels) * length;
    int64_t n = std::llround(fraction * double(total));
    return int(std::clamp<int64_t>(n, 1, total));
}

double mse(const Record& a, const Record& b) {
    if (a.channels != b.channels || a.length != b.length)
        fail_invalid("mse needs matching shapes, got " + std::to_string(a.channels) + "x" +
                     std::to_string(a.length) + " vs " + std::to_string(b.channels) + "x" +
                     std::to_string(b.length));
    std::vector<double> sq(a.samples.size());
    for (size_t i = 0; i < sq.size(); ++i) {
        double d = a.samples[i] - b.samples[i];
        sq[i] = d * d;
    }
    return pairwise_mean(sq);
}

VaeSource training_vae_source(const Dataset& dataset, const VaeConfig& base,
                              const TrainConfig& tcfg) {
    auto cache = std::make_shared<std::map<int, Vae>>();
    return [&dataset, base, tcfg, cache](double fraction) {
        int latent = budget_for_fraction(fraction, base.in_channels, base.crop_len);
        auto it = cache->find(latent);
        if (it == cache->end()) {
            VaeConfig cfg = base;
            cfg.latent_dim = latent;
            it = cache->emplace(latent, train(dataset, cfg, tcfg).model).first;
        }
        return it->second;
    };
}

namespace {

double wavelet_dataset_mse(const Dataset& dataset, const WaveletSpec& spec, int n,
                           SelectionMethod sel, const EnergyProfile* profile) {
    std::vector<double> errs(size_t(dataset.count()));
    parallel_for(dataset.count(), [&](int64_t i) {
        errs[size_t(i)] =
            compress_reconstruct(dataset.records[size_t(i)], spec, n, sel, profile).mse;
    });
    return pairwise_mean(errs);
}

double fpca_dataset_mse(const FpcaBasis& basis, const Dataset& dataset, int k) {
    std::vector<double> errs(size_t(dataset.count()));
    parallel_for(dataset.count(), [&](int64_t i) {
        errs[size_t(i)] = fpca_reconstruct(basis, dataset.records[size_t(i)], k).first;
    });
    return pairwise_mean(errs);
}

}  // namespace

std::vector<CompressionResult> run_compression_benchmark(const Dataset& dataset,
                                                         std::span<const Method> methods,
                                                         std::span<const double> fractions,
                                                         const WaveletSpec& wspec,
                                                         const VaeSource& vae_source,
                                                         const std::string& dataset_id) {
    dataset.validate();
    if (methods.empty()) fail_invalid("benchmark needs at least one method");
    if (fractions.empty()) fail_invalid("benchmark needs at least one fraction");
    int channels = dataset.channels();
    int length = dataset.length();
    for (double f : fractions) budget_for_fraction(f, channels, length);

    auto wants = [&](Method m) {
        return std::find(methods.begin(), methods.end(), m) != methods.end();
    };
    if (wants(Method::Vae) && !vae_source) fail_invalid("VAE benchmark needs a model source");

    EnergyProfile profile;
    if (wants(Method::WaveletGlobal)) profile = energy_profile(dataset, wspec);
    int coeff_total = padded_length(length, wspec.levels);

    FpcaBasis basis;
    if (wants(Method::Fpca)) {
        int kmax = 1;
        for (double f : fractions) kmax = std::max(kmax, budget_for_fraction(f, channels, length));
        int cap = int(std::min<int64_t>(dataset.count(), int64_t(channels) * length));
        basis = fpca_fit(dataset, std::min(kmax, cap));
    }

    std::vector<CompressionResult> out;
    out.reserve(methods.size() * fractions.size());
    for (Method method : methods) {
        for (double f : fractions) {
            CompressionResult r;
            r.method = method;
            r.kept_fraction = f;
            r.dataset_id = dataset_id;
            switch (method) {
                case Method::Vae:
                    r.mse = evaluate_dataset(vae_source(f), dataset);
                    break;
                case Method::WaveletGlobal:
                    r.mse = wavelet_dataset_mse(dataset, wspec,
                                                budget_for_fraction(f, channels, coeff_total),
                                                SelectionMethod::Global, &profile);
                    break;
                case Method::WaveletOracle:
                    r.mse = wavelet_dataset_mse(dataset, wspec,
                                                budget_for_fraction(f, channels, coeff_total),
                                                SelectionMethod::Oracle, nullptr);
                    break;
                case Method::Fpca:
                    r.mse = fpca_dataset_mse(
                        basis, dataset,
                        std::min(budget_for_fraction(f, channels, length), basis.k()));
                    break;
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::vector<CompressionResult> run_cross_dataset_eval(const Vae& model,
                                                      std::span<const Dataset> datasets,
                                                      std::span<const std::string> ids,
                                                      double training_rate) {
    if (datasets.empty()) fail_invalid("cross-dataset eval needs at least one dataset");
    if (datasets.size() != ids.size()) fail_invalid("cross-dataset eval needs one id per dataset");
    std::vector<CompressionResult> out;
    out.reserve(datasets.size());
    for (size_t i = 0; i < datasets.size(); ++i) {
        const Dataset& d = datasets[i];
        d.validate();
        if (d.channels() != model.cfg.in_channels)
            fail_invalid("dataset '" + ids[i] + "' has " + std::to_string(d.channels()) +
                         " channels but the model expects " +
                         std::to_string(model.cfg.in_channels));
        if (d.sampling_rate() != training_rate)
            fail_invalid("dataset '" + ids[i] + "' is sampled at " +
                         format_double(d.sampling_rate()) + " Hz, not the model's " +
                         format_double(training_rate) + " Hz; resample it first");
        out.push_back({Method::Vae, model.cfg.kept_fraction(), evaluate_dataset(model, d), ids[i]});
    }
    return out;
}

NoiseExperiment run_noise_experiment(const Dataset& dataset, const NoiseSpec& spec,
                                     const VaeConfig& vcfg, const TrainConfig& tcfg) {
    dataset.validate();
    if (!(spec.variance_ratio >= 0.0) || spec.variance_ratio >= 1.0)
        fail_invalid("noise variance ratio must be in [0, 1)");

    Rng seeds(spec.seed);
    uint64_t test_seed = seeds.next_u64();
    uint64_t train_seed = seeds.next_u64();

    NoiseExperiment out;
    TrainResult clean = train(dataset, vcfg, tcfg);
    out.clean_history = clean.history;
    double fraction = vcfg.kept_fraction();

    double clean_mse = evaluate_dataset(clean.model, dataset);
    out.results.push_back({NoiseRegime::CleanTrainCleanTest, fraction, clean_mse});
    if (spec.variance_ratio == 0.0) {
        out.results.push_back({NoiseRegime::CleanTrainNoisyTest, fraction, clean_mse});
        out.results.push_back({NoiseRegime::NoisyTrainNoisyTest, fraction, clean_mse});
        return out;
    }

    Dataset noisy_test = add_noise(dataset, spec.variance_ratio, test_seed);
    Dataset noisy_train = add_noise(dataset, spec.variance_ratio, train_seed);
    out.results.push_back({NoiseRegime::CleanTrainNoisyTest, fraction,
                           evaluate_dataset_against(clean.model, noisy_test, dataset)});
    TrainResult noisy = train(noisy_train, vcfg, tcfg);
    out.noisy_history = noisy.history;
    out.results.push_back({NoiseRegime::NoisyTrainNoisyTest, fraction,
                           evaluate_dataset_against(noisy.model, noisy_test, dataset)});
    return out;
}

std::vector<double> reconstruction_errors(const Vae& model, const Dataset& dataset) {
    std::vector<double> errs(size_t(dataset.count()));
    parallel_for(dataset.count(), [&](int64_t i) {
        errs[size_t(i)] = evaluate_record(model, dataset.records[size_t(i)]).mse;
    });
    return errs;
}

std::vector<double> wavelet_errors(const Dataset& dataset, const WaveletSpec& spec,
                                   const EnergyProfile& profile, int n) {
    std::vector<double> errs(size_t(dataset.count()));
    parallel_for(dataset.count(), [&](int64_t i) {
        errs[size_t(i)] = compress_reconstruct(dataset.records[size_t(i)], spec, n,
                                               SelectionMethod::Global, &profile)
                              .mse;
    });
    return errs;
}

namespace {

void require_labeled(const Dataset& dataset) {
    for (size_t i = 0; i < dataset.records.size(); ++i)
        if (dataset.records[i].label == Label::Unknown)
            fail_invalid("record " + std::to_string(i) + " ('" + dataset.records[i].id +
                         "') is unlabeled");
}

AnomalyOutcome outcome_from_errors(const Dataset& dataset, std::vector<double> errors,
                                   double threshold) {
    if (!std::isfinite(threshold)) fail_invalid("threshold must be finite");
    require_labeled(dataset);
    AnomalyOutcome out;
    out.errors = std::move(errors);
    out.predicted.resize(out.errors.size());
    for (size_t i = 0; i < out.errors.size(); ++i) {
        bool flagged = out.errors[i] > threshold;
        out.predicted[i] = flagged ? Label::Anomaly : Label::Normal;
        bool truly = dataset.records[i].label == Label::Anomaly;
        if (truly)
            (flagged ? out.confusion.tp : out.confusion.fn) += 1;
        else
            (flagged ? out.confusion.fp : out.confusion.tn) += 1;
    }
    return out;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> split_errors_by_label(
    const Dataset& dataset, std::span<const double> errors) {
    if (errors.size() != size_t(dataset.count()))
        fail_invalid("need one error per record");
    require_labeled(dataset);
    std::pair<std::vector<double>, std::vector<double>> out;
    for (size_t i = 0; i < errors.size(); ++i)
        (dataset.records[i].label == Label::Anomaly ? out.second : out.first)
            .push_back(errors[i]);
    return out;
}

double choose_threshold(std::span<const double> errors_normal,
                        std::span<const double> errors_anomalous) {
    if (errors_normal.empty() || errors_anomalous.empty())
        fail_invalid("threshold selection needs both normal and anomalous errors");
    for (double e : errors_normal)
        if (!std::isfinite(e)) fail_numeric("non-finite validation error");
    for (double e : errors_anomalous)
        if (!std::isfinite(e)) fail_numeric("non-finite validation error");

    std::vector<double> normal(errors_normal.begin(), errors_normal.end());
    std::vector<double> anomalous(errors_anomalous.begin(), errors_anomalous.end());
    std::sort(normal.begin(), normal.end());
    std::sort(anomalous.begin(), anomalous.end());

    std::vector<double> all;
    all.reserve(normal.size() + anomalous.size());
    all.insert(all.end(), normal.begin(), normal.end());
    all.insert(all.end(), anomalous.begin(), anomalous.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());

    // One candidate per distinct decision boundary, in increasing order:
    // everything flagged, each gap between neighbours, nothing flagged.
    std::vector<double> candidates;
    candidates.reserve(all.size() + 1);
    candidates.push_back(std::nextafter(all.front(), -std::numeric_limits<double>::infinity()));
    for (size_t i = 0; i + 1 < all.size(); ++i) {
        double mid = all[i] + (all[i + 1] - all[i]) / 2.0;
        candidates.push_back(mid > all[i] && mid < all[i + 1] ? mid : all[i]);
    }
    candidates.push_back(all.back());

    double best_threshold = candidates.front();
    double best_accuracy = -1.0;
    for (double t : candidates) {
        auto above = [t](const std::vector<double>& v) {
            return double(v.end() - std::upper_bound(v.begin(), v.end(), t));
        };
        double tpr = above(anomalous) / double(anomalous.size());
        double tnr = 1.0 - above(normal) / double(normal.size());
        double accuracy = (tpr + tnr) / 2.0;
        if (accuracy > best_accuracy) {
            best_accuracy = accuracy;
            best_threshold = t;
        }
    }
    return best_threshold;
}

AnomalyOutcome detect_anomalies(const Vae& model, const Dataset& dataset, double threshold) {
    dataset.validate();
    return outcome_from_errors(dataset, reconstruction_errors(model, dataset), threshold);
}

AnomalyOutcome wavelet_anomaly_baseline(const Dataset& dataset, const WaveletSpec& spec,
                                        const EnergyProfile& profile, int n, double threshold) {
    dataset.validate();
    return outcome_from_errors(dataset, wavelet_errors(dataset, spec, profile, n), threshold);
}

namespace {

constexpr ReferenceEntry kReferenceTable[] = {
    {"ptbxl", Method::Vae, 0.005, 0.02201},
    {"ptbxl", Method::Vae, 0.02, 0.00723},
    {"ptbxl", Method::Vae, 0.33, 0.00487},
    {"ptbxl", Method::WaveletGlobal, 0.005, 0.05074},
    {"ptbxl", Method::WaveletGlobal, 0.02, 0.03815},
    {"ptbxl", Method::WaveletGlobal, 0.33, 0.00603},
    {"ptbxl", Method::WaveletOracle, 0.005, 0.03624},
    {"ptbxl", Method::WaveletOracle, 0.02, 0.02002},
    {"ptbxl", Method::WaveletOracle, 0.33, 0.00008},
    {"georgia", Method::Vae, 0.005, 0.01759},
    {"georgia", Method::Vae, 0.02, 0.00723},
    {"georgia", Method::Vae, 0.33, 0.00531},
    {"georgia", Method::WaveletGlobal, 0.005, 0.04057},
    {"georgia", Method::WaveletGlobal, 0.02, 0.03220},
    {"georgia", Method::WaveletGlobal, 0.33, 0.00576},
    {"georgia", Method::WaveletOracle, 0.005, 0.02871},
    {"georgia", Method::WaveletOracle, 0.02, 0.01612},
    {"georgia", Method::WaveletOracle, 0.33, 0.00008},
    {"china", Method::Vae, 0.005, 0.03632},
    {"china", Method::Vae, 0.02, 0.01972},
    {"china", Method::Vae, 0.33, 0.01424},
    {"china", Method::WaveletGlobal, 0.005, 0.06356},
    {"china", Method::WaveletGlobal, 0.02, 0.05313},
    {"china", Method::WaveletGlobal, 0.33, 0.00710},
    {"china", Method::WaveletOracle, 0.005, 0.04053},
    {"china", Method::WaveletOracle, 0.02, 0.02175},
    {"china", Method::WaveletOracle, 0.33, 0.00009},
};

}  // namespace

std::span<const ReferenceEntry> reference_compression_table() { return kReferenceTable; }

}  // namespace tsc
