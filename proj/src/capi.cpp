#include "tsc.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bench.hpp"
#include "errors.hpp"
#include "fpca.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "preprocess.hpp"
#include "record.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "synth.hpp"
#include "train.hpp"
#include "vae.hpp"
#include "wavelet.hpp"

struct tsc_dataset {
    tsc::Dataset value;
};
struct tsc_vae {
    tsc::Vae value;
};
struct tsc_fpca {
    tsc::FpcaBasis value;
};
struct tsc_results {
    std::vector<tsc::ResultRow> rows;
};
struct tsc_detectors {
    std::vector<tsc::DetectorResult> rows;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
tsc_status api_call(F&& body) noexcept {
    try {
        body();
        return TSC_OK;
    } catch (const tsc::Error& e) {
        g_last_error = e.what();
        switch (e.kind()) {
            case tsc::ErrorKind::Invalid: return TSC_ERR_INVALID;
            case tsc::ErrorKind::Io: return TSC_ERR_IO;
            case tsc::ErrorKind::Format: return TSC_ERR_FORMAT;
            case tsc::ErrorKind::Numeric: return TSC_ERR_NUMERIC;
        }
        return TSC_ERR_UNKNOWN;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TSC_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown failure";
        return TSC_ERR_UNKNOWN;
    }
}

void need(const void* ptr, const char* name) {
    if (!ptr) tsc::fail_invalid(std::string("null argument: ") + name);
}

tsc::Format parse_format(const char* format, const char* path) {
    std::string f = format ? format : "auto";
    if (f == "auto" || f.empty()) return tsc::detect_format(path);
    return tsc::format_from_string(f);
}

tsc::WaveletFamily parse_family(const char* family) {
    std::string f = family ? family : "db4";
    if (f == "haar") return tsc::WaveletFamily::Haar;
    if (f == "db4" || f == "daubechies4") return tsc::WaveletFamily::Daubechies4;
    tsc::fail_invalid("unknown wavelet family '" + f + "' (expected haar or db4)");
}

tsc::WaveletSpec resolve_spec(const tsc_dataset* ds, const char* family, int levels) {
    tsc::WaveletSpec spec;
    spec.family = parse_family(family);
    if (levels < 0) tsc::fail_invalid("levels must be >= 0");
    spec.levels = levels == 0 ? tsc::auto_levels(ds->value.length(), spec.family) : levels;
    return spec;
}

tsc::SyntheticConfig from_c(const tsc_synth_config& c) {
    tsc::SyntheticConfig cfg;
    cfg.count = int(c.count);
    cfg.channels = c.channels;
    cfg.length = c.length;
    cfg.sampling_rate = c.sampling_rate;
    cfg.heart_rate_low = c.heart_rate_low;
    cfg.heart_rate_high = c.heart_rate_high;
    cfg.anomaly_fraction = c.anomaly_fraction;
    cfg.seed = c.seed;
    return cfg;
}

tsc::VaeConfig from_c(const tsc_vae_config* c) {
    tsc::VaeConfig cfg;
    if (!c) return cfg;
    cfg.in_channels = c->in_channels;
    cfg.crop_len = c->crop_len;
    cfg.conv_channels = {c->conv_channels[0], c->conv_channels[1], c->conv_channels[2]};
    cfg.kernel_size = c->kernel_size;
    cfg.strides = {c->strides[0], c->strides[1], c->strides[2]};
    cfg.latent_dim = c->latent_dim;
    cfg.beta = c->beta;
    return cfg;
}

tsc::TrainConfig from_c(const tsc_train_config* c) {
    tsc::TrainConfig cfg;
    if (!c) return cfg;
    cfg.epochs = c->epochs;
    cfg.batch_size = c->batch_size;
    cfg.learning_rate = c->learning_rate;
    cfg.seed = c->seed;
    cfg.resample_low = c->resample_low;
    cfg.resample_high = c->resample_high;
    cfg.kl_beta = c->kl_beta;
    cfg.validation_fraction = c->validation_fraction;
    return cfg;
}

tsc::Label parse_label(const char* label) {
    std::string l = label ? label : "";
    if (l == "normal" || l == "Normal") return tsc::Label::Normal;
    if (l == "anomaly" || l == "Anomaly") return tsc::Label::Anomaly;
    tsc::fail_invalid("unknown label '" + l + "' (expected normal or anomaly)");
}

}  // namespace

extern "C" {

const char* tsc_last_error(void) { return g_last_error.c_str(); }

tsc_status tsc_set_thread_count(int n) {
    return api_call([&] { tsc::set_thread_count(n); });
}

void tsc_dataset_free(tsc_dataset* ds) { delete ds; }
void tsc_vae_free(tsc_vae* vae) { delete vae; }
void tsc_fpca_free(tsc_fpca* basis) { delete basis; }
void tsc_results_free(tsc_results* results) { delete results; }
void tsc_detectors_free(tsc_detectors* detectors) { delete detectors; }

void tsc_synth_config_default(tsc_synth_config* cfg) {
    if (!cfg) return;
    tsc::SyntheticConfig d;
    *cfg = {d.count,         d.channels,        d.length, d.sampling_rate, d.heart_rate_low,
            d.heart_rate_high, d.anomaly_fraction, d.seed};
}

tsc_status tsc_synth(const tsc_synth_config* cfg, tsc_dataset** out) {
    return api_call([&] {
        need(cfg, "cfg");
        need(out, "out");
        *out = nullptr;
        *out = new tsc_dataset{tsc::generate_synthetic(from_c(*cfg))};
    });
}

tsc_status tsc_dataset_load(const char* path, const char* format, tsc_dataset** out) {
    return api_call([&] {
        need(path, "path");
        need(out, "out");
        *out = nullptr;
        *out = new tsc_dataset{tsc::load_dataset(path, parse_format(format, path))};
    });
}

tsc_status tsc_dataset_save(const tsc_dataset* ds, const char* path, const char* format) {
    return api_call([&] {
        need(ds, "ds");
        need(path, "path");
        tsc::save_dataset(ds->value, path, parse_format(format, path));
    });
}

int64_t tsc_dataset_count(const tsc_dataset* ds) { return ds ? ds->value.count() : 0; }
int32_t tsc_dataset_channels(const tsc_dataset* ds) { return ds ? ds->value.channels() : 0; }
int32_t tsc_dataset_length(const tsc_dataset* ds) { return ds ? ds->value.length() : 0; }
double tsc_dataset_sampling_rate(const tsc_dataset* ds) {
    return ds ? ds->value.sampling_rate() : 0.0;
}

tsc_status tsc_dataset_standardize(const tsc_dataset* ds, double* out_mean, double* out_std,
                                   tsc_dataset** out) {
    return api_call([&] {
        need(ds, "ds");
        need(out, "out");
        *out = nullptr;
        auto [standardized, stats] = tsc::standardize(ds->value);
        if (out_mean)
            std::copy(stats.mean.begin(), stats.mean.end(), out_mean);
        if (out_std)
            std::copy(stats.stddev.begin(), stats.stddev.end(), out_std);
        *out = new tsc_dataset{std::move(standardized)};
    });
}

tsc_status tsc_dataset_resample(const tsc_dataset* ds, double target_rate, tsc_dataset** out) {
    return api_call([&] {
        need(ds, "ds");
        need(out, "out");
        *out = nullptr;
        ds->value.validate();
        tsc::Dataset resampled;
        resampled.records.reserve(ds->value.records.size());
        for (const auto& rec : ds->value.records)
            resampled.records.push_back(tsc::resample(rec, target_rate));
        *out = new tsc_dataset{std::move(resampled)};
    });
}

tsc_status tsc_dataset_add_noise(const tsc_dataset* ds, double variance_ratio, uint64_t seed,
                                 tsc_dataset** out) {
    return api_call([&] {
        need(ds, "ds");
        need(out, "out");
        *out = nullptr;
        *out = new tsc_dataset{tsc::add_noise(ds->value, variance_ratio, seed)};
    });
}

tsc_status tsc_dataset_filter_label(const tsc_dataset* ds, const char* label, tsc_dataset** out) {
    return api_call([&] {
        need(ds, "ds");
        need(out, "out");
        *out = nullptr;
        tsc::Label wanted = parse_label(label);
        tsc::Dataset filtered;
        for (const auto& rec : ds->value.records)
            if (rec.label == wanted) filtered.records.push_back(rec);
        if (filtered.records.empty())
            tsc::fail_invalid(std::string("no records with label '") + tsc::to_string(wanted) +
                              "'");
        *out = new tsc_dataset{std::move(filtered)};
    });
}

tsc_status tsc_dataset_split(const tsc_dataset* ds, double fraction, uint64_t seed,
                             tsc_dataset** out_a, tsc_dataset** out_b) {
    return api_call([&] {
        need(ds, "ds");
        need(out_a, "out_a");
        need(out_b, "out_b");
        *out_a = nullptr;
        *out_b = nullptr;
        if (!(fraction > 0.0) || fraction >= 1.0)
            tsc::fail_invalid("split fraction must be in (0, 1)");
        int64_t count = ds->value.count();
        std::vector<int64_t> order(static_cast<size_t>(count));
        for (int64_t i = 0; i < count; ++i) order[size_t(i)] = i;
        tsc::Rng rng(seed);
        for (int64_t i = count - 1; i > 0; --i)
            std::swap(order[size_t(i)], order[size_t(rng.below(i + 1))]);
        int64_t count_a = std::llround(double(count) * fraction);
        if (count_a < 1 || count_a >= count)
            tsc::fail_invalid("split would leave one side empty");
        tsc::Dataset a, b;
        for (int64_t i = 0; i < count; ++i)
            (i < count_a ? a : b).records.push_back(ds->value.records[size_t(order[size_t(i)])]);
        *out_a = new tsc_dataset{std::move(a)};
        *out_b = new tsc_dataset{std::move(b)};
    });
}

tsc_status tsc_wavelet_sweep(const tsc_dataset* ds, const char* dataset_id, const char* family,
                             int levels, const char* method, const double* fractions,
                             size_t fraction_count, int per_record, tsc_results** out) {
    return api_call([&] {
        need(ds, "ds");
        need(dataset_id, "dataset_id");
        need(method, "method");
        need(fractions, "fractions");
        need(out, "out");
        *out = nullptr;
        if (fraction_count == 0) tsc::fail_invalid("need at least one fraction");
        ds->value.validate();

        tsc::Method m = tsc::method_from_string(method);
        if (m != tsc::Method::WaveletGlobal && m != tsc::Method::WaveletOracle)
            tsc::fail_invalid("wavelet sweep method must be global or oracle");
        tsc::SelectionMethod sel = m == tsc::Method::WaveletGlobal
                                       ? tsc::SelectionMethod::Global
                                       : tsc::SelectionMethod::Oracle;
        tsc::WaveletSpec spec = resolve_spec(ds, family, levels);

        tsc::EnergyProfile profile;
        if (sel == tsc::SelectionMethod::Global)
            profile = tsc::energy_profile(ds->value, spec);
        const tsc::EnergyProfile* prof =
            sel == tsc::SelectionMethod::Global ? &profile : nullptr;

        int channels = ds->value.channels();
        int coeff_total = tsc::padded_length(ds->value.length(), spec.levels);
        auto handle = std::make_unique<tsc_results>();
        for (size_t fi = 0; fi < fraction_count; ++fi) {
            double f = fractions[fi];
            int n = tsc::budget_for_fraction(f, channels, coeff_total);
            std::vector<double> errs(size_t(ds->value.count()));
            tsc::parallel_for(ds->value.count(), [&](int64_t i) {
                errs[size_t(i)] =
                    tsc::compress_reconstruct(ds->value.records[size_t(i)], spec, n, sel, prof)
                        .mse;
            });
            if (per_record)
                for (size_t i = 0; i < errs.size(); ++i)
                    handle->rows.push_back(
                        {ds->value.records[i].id, tsc::to_string(m), f, errs[i], ""});
            handle->rows.push_back(
                {dataset_id, tsc::to_string(m), f, tsc::pairwise_mean(errs), ""});
        }
        *out = handle.release();
    });
}

tsc_status tsc_fpca_fit(const tsc_dataset* ds, int components, tsc_fpca** out) {
    return api_call([&] {
        need(ds, "ds");
        need(out, "out");
        *out = nullptr;
        *out = new tsc_fpca{tsc::fpca_fit(ds->value, components)};
    });
}

tsc_status tsc_fpca_eval(const tsc_fpca* basis, const tsc_dataset* ds, int components,
                         double* out_mse) {
    return api_call([&] {
        need(basis, "basis");
        need(ds, "ds");
        need(out_mse, "out_mse");
        ds->value.validate();
        std::vector<double> errs(size_t(ds->value.count()));
        tsc::parallel_for(ds->value.count(), [&](int64_t i) {
            errs[size_t(i)] =
                tsc::fpca_reconstruct(basis->value, ds->value.records[size_t(i)], components)
                    .first;
        });
        *out_mse = tsc::pairwise_mean(errs);
    });
}

tsc_status tsc_fpca_basis_dataset(const tsc_fpca* basis, tsc_dataset** out) {
    return api_call([&] {
        need(basis, "basis");
        need(out, "out");
        *out = nullptr;
        *out = new tsc_dataset{tsc::basis_as_dataset(basis->value)};
    });
}

tsc_status tsc_fpca_sweep(const tsc_dataset* ds, const char* dataset_id, const double* fractions,
                          size_t fraction_count, int max_components, tsc_results** out) {
    return api_call([&] {
        need(ds, "ds");
        need(dataset_id, "dataset_id");
        need(fractions, "fractions");
        need(out, "out");
        *out = nullptr;
        if (fraction_count == 0) tsc::fail_invalid("need at least one fraction");
        ds->value.validate();

        int channels = ds->value.channels();
        int length = ds->value.length();
        int kmax = 1;
        for (size_t i = 0; i < fraction_count; ++i)
            kmax = std::max(kmax, tsc::budget_for_fraction(fractions[i], channels, length));
        int cap = int(std::min<int64_t>(ds->value.count(), int64_t(channels) * length));
        if (max_components > 0) cap = std::min(cap, max_components);
        tsc::FpcaBasis basis = tsc::fpca_fit(ds->value, std::min(kmax, cap));

        auto handle = std::make_unique<tsc_results>();
        for (size_t fi = 0; fi < fraction_count; ++fi) {
            double f = fractions[fi];
            int k = std::min(tsc::budget_for_fraction(f, channels, length), basis.k());
            std::vector<double> errs(size_t(ds->value.count()));
            tsc::parallel_for(ds->value.count(), [&](int64_t i) {
                errs[size_t(i)] =
                    tsc::fpca_reconstruct(basis, ds->value.records[size_t(i)], k).first;
            });
            handle->rows.push_back({dataset_id, tsc::to_string(tsc::Method::Fpca), f,
                                    tsc::pairwise_mean(errs), ""});
        }
        *out = handle.release();
    });
}

void tsc_vae_config_default(tsc_vae_config* cfg) {
    if (!cfg) return;
    tsc::VaeConfig d;
    *cfg = {d.in_channels,
            d.crop_len,
            {d.conv_channels[0], d.conv_channels[1], d.conv_channels[2]},
            d.kernel_size,
            {d.strides[0], d.strides[1], d.strides[2]},
            d.latent_dim,
            d.beta};
}

void tsc_train_config_default(tsc_train_config* cfg) {
    if (!cfg) return;
    tsc::TrainConfig d;
    *cfg = {d.epochs,       d.batch_size, d.learning_rate,       d.seed,
            d.resample_low, d.resample_high, d.kl_beta, d.validation_fraction};
}

tsc_status tsc_vae_train(const tsc_dataset* ds, const tsc_vae_config* vcfg,
                         const tsc_train_config* tcfg, tsc_vae** out, tsc_train_stats* stats) {
    return api_call([&] {
        need(ds, "ds");
        need(out, "out");
        *out = nullptr;
        tsc::TrainResult result = tsc::train(ds->value, from_c(vcfg), from_c(tcfg));
        if (stats) {
            stats->best_epoch = result.best_epoch;
            stats->final_train_loss = result.history.back().train_loss;
            stats->best_val_loss = result.history[size_t(result.best_epoch)].val_loss;
            stats->best_val_recon = result.history[size_t(result.best_epoch)].val_recon;
        }
        *out = new tsc_vae{std::move(result.model)};
    });
}

tsc_status tsc_vae_save(const tsc_vae* vae, const char* path) {
    return api_call([&] {
        need(vae, "vae");
        need(path, "path");
        tsc::save_vae(vae->value, path);
    });
}

tsc_status tsc_vae_load(const char* path, tsc_vae** out) {
    return api_call([&] {
        need(path, "path");
        need(out, "out");
        *out = nullptr;
        *out = new tsc_vae{tsc::load_vae(path)};
    });
}

int32_t tsc_vae_latent_dim(const tsc_vae* vae) { return vae ? vae->value.cfg.latent_dim : 0; }

int64_t tsc_vae_parameter_count(const tsc_vae* vae) {
    return vae ? vae->value.parameter_count() : 0;
}

tsc_status tsc_vae_eval(const tsc_vae* vae, const tsc_dataset* ds, double* out_mse) {
    return api_call([&] {
        need(vae, "vae");
        need(ds, "ds");
        need(out_mse, "out_mse");
        *out_mse = tsc::evaluate_dataset(vae->value, ds->value);
    });
}

tsc_status tsc_vae_reconstruct(const tsc_vae* vae, const tsc_dataset* ds, tsc_dataset** out) {
    return api_call([&] {
        need(vae, "vae");
        need(ds, "ds");
        need(out, "out");
        *out = nullptr;
        ds->value.validate();
        tsc::Dataset recon;
        recon.records.resize(ds->value.records.size());
        tsc::parallel_for(ds->value.count(), [&](int64_t i) {
            recon.records[size_t(i)] =
                tsc::evaluate_record(vae->value, ds->value.records[size_t(i)]).reconstruction;
        });
        *out = new tsc_dataset{std::move(recon)};
    });
}

tsc_status tsc_vae_record_errors(const tsc_vae* vae, const tsc_dataset* ds, double* out_errors) {
    return api_call([&] {
        need(vae, "vae");
        need(ds, "ds");
        need(out_errors, "out_errors");
        std::vector<double> errs = tsc::reconstruction_errors(vae->value, ds->value);
        std::copy(errs.begin(), errs.end(), out_errors);
    });
}

tsc_status tsc_bench_run(const tsc_dataset* ds, const char* dataset_id,
                         const char* const* methods, size_t method_count,
                         const double* fractions, size_t fraction_count, const char* family,
                         int levels, const tsc_vae_config* vcfg, const tsc_train_config* tcfg,
                         const char* const* checkpoints, size_t checkpoint_count,
                         tsc_results** out) {
    return api_call([&] {
        need(ds, "ds");
        need(dataset_id, "dataset_id");
        need(methods, "methods");
        need(fractions, "fractions");
        need(out, "out");
        *out = nullptr;
        if (method_count == 0) tsc::fail_invalid("need at least one method");
        if (fraction_count == 0) tsc::fail_invalid("need at least one fraction");

        std::vector<tsc::Method> parsed;
        for (size_t i = 0; i < method_count; ++i) {
            need(methods[i], "methods[i]");
            parsed.push_back(tsc::method_from_string(methods[i]));
        }
        tsc::WaveletSpec spec = resolve_spec(ds, family, levels);
        tsc::VaeConfig vae_cfg = from_c(vcfg);
        tsc::TrainConfig train_cfg = from_c(tcfg);

        std::vector<tsc::Vae> loaded;
        for (size_t i = 0; i < checkpoint_count; ++i) {
            need(checkpoints[i], "checkpoints[i]");
            loaded.push_back(tsc::load_vae(checkpoints[i]));
        }

        tsc::VaeSource source;
        if (!loaded.empty()) {
            source = [loaded = std::move(loaded)](double fraction) {
                for (const auto& model : loaded)
                    if (model.cfg.latent_dim ==
                        tsc::budget_for_fraction(fraction, model.cfg.in_channels,
                                                 model.cfg.crop_len))
                        return model;
                tsc::fail_invalid("no checkpoint matches the latent budget for fraction " +
                                  tsc::format_double(fraction));
            };
        } else {
            source = tsc::training_vae_source(ds->value, vae_cfg, train_cfg);
        }

        std::vector<tsc::CompressionResult> results = tsc::run_compression_benchmark(
            ds->value, parsed, {fractions, fraction_count}, spec, source, dataset_id);
        *out = new tsc_results{tsc::result_rows(results)};
    });
}

tsc_status tsc_cross_eval(const tsc_vae* vae, const tsc_dataset* const* datasets,
                          const char* const* ids, size_t count, double training_rate,
                          tsc_results** out) {
    return api_call([&] {
        need(vae, "vae");
        need(datasets, "datasets");
        need(ids, "ids");
        need(out, "out");
        *out = nullptr;
        std::vector<tsc::Dataset> sets;
        std::vector<std::string> names;
        for (size_t i = 0; i < count; ++i) {
            need(datasets[i], "datasets[i]");
            need(ids[i], "ids[i]");
            sets.push_back(datasets[i]->value);
            names.push_back(ids[i]);
        }
        std::vector<tsc::CompressionResult> results =
            tsc::run_cross_dataset_eval(vae->value, sets, names, training_rate);
        *out = new tsc_results{tsc::result_rows(results)};
    });
}

tsc_status tsc_noise_run(const tsc_dataset* ds, const char* dataset_id, double variance_ratio,
                         uint64_t seed, const tsc_vae_config* vcfg,
                         const tsc_train_config* tcfg, tsc_results** out) {
    return api_call([&] {
        need(ds, "ds");
        need(dataset_id, "dataset_id");
        need(out, "out");
        *out = nullptr;
        tsc::NoiseExperiment experiment = tsc::run_noise_experiment(
            ds->value, {variance_ratio, seed}, from_c(vcfg), from_c(tcfg));
        *out = new tsc_results{tsc::result_rows(dataset_id, experiment.results)};
    });
}

tsc_status tsc_anomaly_run(const tsc_dataset* train_normal, const tsc_dataset* validation,
                           const tsc_dataset* test, const tsc_vae_config* vcfg,
                           const tsc_train_config* tcfg, const char* family, int levels,
                           double wavelet_fraction, double* out_vae_threshold,
                           double* out_wavelet_threshold, tsc_detectors** out) {
    return api_call([&] {
        need(train_normal, "train_normal");
        need(validation, "validation");
        need(test, "test");
        need(out, "out");
        *out = nullptr;
        const tsc::Dataset& train_set = train_normal->value;
        train_set.validate();
        for (const auto& rec : train_set.records)
            if (rec.label != tsc::Label::Normal)
                tsc::fail_invalid("anomaly training set must contain only normal records");
        for (const tsc::Dataset* d : {&validation->value, &test->value}) {
            d->validate();
            if (d->channels() != train_set.channels() || d->length() != train_set.length())
                tsc::fail_invalid("validation and test sets must match the training shape");
        }

        tsc::TrainResult trained = tsc::train(train_set, from_c(vcfg), from_c(tcfg));
        std::vector<double> val_errs =
            tsc::reconstruction_errors(trained.model, validation->value);
        auto [val_normal, val_anomalous] =
            tsc::split_errors_by_label(validation->value, val_errs);
        double vae_threshold = tsc::choose_threshold(val_normal, val_anomalous);
        tsc::AnomalyOutcome vae_outcome =
            tsc::detect_anomalies(trained.model, test->value, vae_threshold);

        tsc::WaveletSpec spec = resolve_spec(train_normal, family, levels);
        tsc::EnergyProfile profile = tsc::energy_profile(train_set, spec);
        int n = tsc::budget_for_fraction(
            wavelet_fraction, train_set.channels(),
            tsc::padded_length(train_set.length(), spec.levels));
        std::vector<double> wval_errs =
            tsc::wavelet_errors(validation->value, spec, profile, n);
        auto [wval_normal, wval_anomalous] =
            tsc::split_errors_by_label(validation->value, wval_errs);
        double wavelet_threshold = tsc::choose_threshold(wval_normal, wval_anomalous);
        tsc::AnomalyOutcome wavelet_outcome =
            tsc::wavelet_anomaly_baseline(test->value, spec, profile, n, wavelet_threshold);

        if (out_vae_threshold) *out_vae_threshold = vae_threshold;
        if (out_wavelet_threshold) *out_wavelet_threshold = wavelet_threshold;
        *out = new tsc_detectors{{{tsc::to_string(tsc::Method::Vae), vae_outcome.confusion},
                                  {tsc::to_string(tsc::Method::WaveletGlobal),
                                   wavelet_outcome.confusion}}};
    });
}

size_t tsc_results_count(const tsc_results* results) { return results ? results->rows.size() : 0; }

tsc_status tsc_results_row(const tsc_results* results, size_t index, tsc_result_row* out) {
    return api_call([&] {
        need(results, "results");
        need(out, "out");
        if (index >= results->rows.size()) tsc::fail_invalid("row index out of range");
        const tsc::ResultRow& row = results->rows[index];
        out->dataset = row.dataset.c_str();
        out->method = row.method.c_str();
        out->kept_fraction = row.kept_fraction;
        out->mse = row.mse;
        out->regime = row.regime.c_str();
    });
}

tsc_status tsc_results_append_reference(tsc_results* results) {
    return api_call([&] {
        need(results, "results");
        std::vector<tsc::ResultRow> rows = tsc::reference_rows();
        results->rows.insert(results->rows.end(), rows.begin(), rows.end());
    });
}

tsc_status tsc_results_write_csv(const tsc_results* results, const char* path) {
    return api_call([&] {
        need(results, "results");
        need(path, "path");
        tsc::write_results_csv(path, results->rows);
    });
}

tsc_status tsc_results_write_svg(const tsc_results* results, const char* path) {
    return api_call([&] {
        need(results, "results");
        need(path, "path");
        tsc::write_sweep_svg(path, results->rows);
    });
}

size_t tsc_detectors_count(const tsc_detectors* detectors) {
    return detectors ? detectors->rows.size() : 0;
}

tsc_status tsc_detectors_row(const tsc_detectors* detectors, size_t index,
                             tsc_detector_row* out) {
    return api_call([&] {
        need(detectors, "detectors");
        need(out, "out");
        if (index >= detectors->rows.size()) tsc::fail_invalid("row index out of range");
        const tsc::DetectorResult& row = detectors->rows[index];
        out->detector = row.detector.c_str();
        out->tp = row.confusion.tp;
        out->fp = row.confusion.fp;
        out->tn = row.confusion.tn;
        out->fn = row.confusion.fn;
        out->balanced_accuracy = row.confusion.balanced_accuracy();
    });
}

tsc_status tsc_detectors_write_csv(const tsc_detectors* detectors, const char* path) {
    return api_call([&] {
        need(detectors, "detectors");
        need(path, "path");
        tsc::write_confusion_csv(path, detectors->rows);
    });
}

}  // extern "C"
