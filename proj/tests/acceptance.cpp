// Acceptance checks, one line of output each: [N] PASS/FAIL/SKIP detail.
// Exit status is the number of failures.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "fpca.hpp"
#include "io.hpp"
#include "preprocess.hpp"
#include "record.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "synth.hpp"
#include "train.hpp"
#include "vae.hpp"
#include "wavelet.hpp"

using namespace tsc;
namespace fs = std::filesystem;

namespace {

constexpr double kRoundTripTol = 1e-9;    // max abs reconstruction error
constexpr double kParsevalTol = 1e-10;    // relative energy mismatch
constexpr double kOracleSlack = 1e-12;    // oracle may not lose by more
constexpr double kAdjointTol = 1e-10;     // relative adjoint identity error
constexpr double kGradStep = 1e-4;        // central difference step
constexpr double kGradTol = 1e-4;         // max relative gradient error
constexpr double kMutationFloor = 1e-2;   // tampered gradients must exceed this
constexpr double kKlExactTol = 1e-12;     // closed-form spot check
constexpr double kKlFloor = -1e-13;       // non-negativity up to rounding
constexpr double kTrainFactor = 0.5;      // of the mean-predictor MSE
constexpr double kNoiseRatioMax = 1.5;    // noisy-test over clean-test MSE
constexpr double kAnomalyFloor = 0.65;    // balanced accuracy
constexpr double kWaveletTimeLimit = 10.0;   // seconds
constexpr double kNeuralTimeLimit = 60.0;    // seconds
constexpr double kTrainTimeLimit = 900.0;    // seconds, both runs together

struct Outcome {
    enum Kind { Pass, Fail, Skip } kind = Pass;
    std::string detail;
};

Outcome pass(const std::string& detail) { return {Outcome::Pass, detail}; }
Outcome fail(const std::string& detail) { return {Outcome::Fail, detail}; }
Outcome skip(const std::string& detail) { return {Outcome::Skip, detail}; }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Record random_record(int channels, int length, uint64_t seed) {
    Record rec;
    rec.id = "r" + std::to_string(seed);
    rec.channels = channels;
    rec.length = length;
    rec.sampling_rate = 100.0;
    rec.label = Label::Normal;
    rec.samples.resize(size_t(channels) * length);
    Rng rng(seed);
    for (double& s : rec.samples) s = rng.normal();
    return rec;
}

Dataset standardized_synth(int count, int channels, double anomaly_fraction, uint64_t seed) {
    SyntheticConfig cfg;
    cfg.count = count;
    cfg.channels = channels;
    cfg.length = 1000;
    cfg.anomaly_fraction = anomaly_fraction;
    cfg.seed = seed;
    return standardize(generate_synthetic(cfg)).first;
}

// Constant per-channel prediction at the dataset mean.
double mean_predictor_mse(const Dataset& ds) {
    int channels = ds.channels();
    std::vector<double> mean(size_t(channels), 0.0);
    int64_t per_channel = int64_t(ds.count()) * ds.length();
    for (const auto& rec : ds.records)
        for (int c = 0; c < channels; ++c)
            for (int i = 0; i < rec.length; ++i) mean[size_t(c)] += rec.at(c, i);
    for (double& m : mean) m /= double(per_channel);

    double err = 0.0;
    for (const auto& rec : ds.records)
        for (int c = 0; c < channels; ++c)
            for (int i = 0; i < rec.length; ++i) {
                double d = rec.at(c, i) - mean[size_t(c)];
                err += d * d;
            }
    return err / (double(per_channel) * channels);
}

Outcome wavelet_invertibility() {
    auto start = std::chrono::steady_clock::now();
    double worst_rt = 0.0, worst_energy = 0.0;
    int combos = 0;

    for (auto family : {WaveletFamily::Haar, WaveletFamily::Daubechies4}) {
        int deepest = max_levels(1000, family);
        for (int levels = 1; levels <= deepest; ++levels) {
            ++combos;
            WaveletSpec spec{family, levels, BoundaryRule::PeriodicExtension};
            for (int r = 0; r < 100; ++r) {
                uint64_t seed = uint64_t(combos) * 1000 + uint64_t(r);
                Record rec = random_record(1, 1000, seed);
                CoefficientTree tree = dwt_forward(rec, spec);
                Record back = dwt_inverse(tree);

                for (size_t i = 0; i < rec.samples.size(); ++i)
                    worst_rt = std::max(worst_rt, std::abs(back.samples[i] - rec.samples[i]));

                double se = 0.0, ce = 0.0;
                for (double s : rec.samples) se += s * s;
                for (double c : tree.coeffs) ce += c * c;
                worst_energy = std::max(worst_energy, std::abs(se - ce) / se);
            }
        }
    }

    double elapsed = seconds_since(start);
    if (worst_rt >= kRoundTripTol)
        return fail("round-trip error " + fmt(worst_rt) + " >= " + fmt(kRoundTripTol));
    if (worst_energy >= kParsevalTol)
        return fail("energy mismatch " + fmt(worst_energy) + " >= " + fmt(kParsevalTol));
    if (elapsed >= kWaveletTimeLimit)
        return fail("took " + fmt(elapsed) + "s, limit " + fmt(kWaveletTimeLimit) + "s");
    return pass(std::to_string(combos) + " family/level combos, worst round-trip " +
                fmt(worst_rt) + ", worst energy " + fmt(worst_energy) + ", " + fmt(elapsed) +
                "s");
}

Outcome oracle_dominance() {
    SyntheticConfig cfg;
    cfg.count = 50;
    cfg.channels = 1;
    cfg.length = 1000;
    cfg.seed = 202;
    Dataset ds = generate_synthetic(cfg);

    WaveletSpec spec{WaveletFamily::Daubechies4,
                     auto_levels(1000, WaveletFamily::Daubechies4),
                     BoundaryRule::PeriodicExtension};
    EnergyProfile profile = energy_profile(ds, spec);
    int total = padded_length(1000, spec.levels);

    int checks = 0;
    for (double f : {0.01, 0.02, 0.05, 0.10, 0.33}) {
        int n = budget_for_fraction(f, 1, total);
        for (const auto& rec : ds.records) {
            auto global = compress_reconstruct(rec, spec, n, SelectionMethod::Global, &profile);
            auto oracle = compress_reconstruct(rec, spec, n, SelectionMethod::Oracle);
            ++checks;
            if (oracle.mse > global.mse + kOracleSlack)
                return fail("record " + rec.id + " fraction " + fmt(f) + ": oracle " +
                            fmt(oracle.mse) + " > global " + fmt(global.mse));
        }
    }
    return pass(std::to_string(checks) + " record/budget pairs, oracle never worse");
}

Outcome gradients_are_exact() {
    auto start = std::chrono::steady_clock::now();

    struct Shape {
        int batch, in_ch, out_ch, kernel, stride, length;
    };
    const Shape shapes[] = {
        {1, 1, 1, 3, 1, 8},  {2, 3, 5, 7, 2, 33},  {1, 4, 2, 5, 3, 17},
        {3, 2, 6, 7, 2, 64}, {2, 5, 3, 3, 2, 11},  {1, 6, 4, 7, 1, 40},
    };
    double worst_adjoint = 0.0;
    for (const auto& s : shapes) {
        int pad = (s.kernel - 1) / 2;
        int out_len = conv_out_length(s.length, s.kernel, s.stride, pad);

        Rng rng(uint64_t(s.length) * 7 + uint64_t(s.kernel));
        std::vector<double> w(size_t(s.out_ch) * s.in_ch * s.kernel);
        for (double& v : w) v = rng.normal();
        Tensor x(s.batch, s.in_ch, s.length), y(s.batch, s.out_ch, out_len);
        for (double& v : x.values) v = rng.normal();
        for (double& v : y.values) v = rng.normal();

        Tensor cx = conv1d_forward(x, w, std::vector<double>(size_t(s.out_ch), 0.0), s.out_ch,
                                   s.kernel, s.stride, pad);
        Tensor ty = tconv1d_forward(y, w, std::vector<double>(size_t(s.in_ch), 0.0), s.in_ch,
                                    s.kernel, s.stride, pad, s.length);
        double lhs = 0.0, rhs = 0.0;
        for (size_t i = 0; i < cx.values.size(); ++i) lhs += cx.values[i] * y.values[i];
        for (size_t i = 0; i < ty.values.size(); ++i) rhs += ty.values[i] * x.values[i];
        worst_adjoint = std::max(
            worst_adjoint, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0}));
    }
    if (worst_adjoint >= kAdjointTol)
        return fail("adjoint identity error " + fmt(worst_adjoint) + " >= " + fmt(kAdjointTol));

    VaeConfig cfg;
    cfg.in_channels = 2;
    cfg.crop_len = 64;
    cfg.conv_channels = {6, 8, 10};
    cfg.kernel_size = 7;
    cfg.latent_dim = 6;
    Vae vae = Vae::init(cfg, 303);
    Tensor x(3, 2, 64);
    Rng rng(304);
    for (double& v : x.values) v = rng.normal();

    GradCheckOptions opts;
    opts.step = kGradStep;
    opts.seed = 9;
    double err = gradient_check(vae, x, opts);
    if (err >= kGradTol)
        return fail("gradient error " + fmt(err) + " >= " + fmt(kGradTol));

    opts.corrupt_grads = [](Vae& grads) {
        for (auto& [name, vec] : grads.params())
            for (double& g : *vec) g *= 1.1;
    };
    double tampered = gradient_check(vae, x, opts);
    if (tampered <= kMutationFloor)
        return fail("tampered gradients scored " + fmt(tampered) + ", expected > " +
                    fmt(kMutationFloor));

    double elapsed = seconds_since(start);
    if (elapsed >= kNeuralTimeLimit)
        return fail("took " + fmt(elapsed) + "s, limit " + fmt(kNeuralTimeLimit) + "s");
    return pass("adjoint " + fmt(worst_adjoint) + ", gradient error " + fmt(err) +
                ", tampered " + fmt(tampered) + ", " + fmt(elapsed) + "s");
}

Outcome kl_closed_form() {
    GaussianLatent unit{1, 1, {1.0}, {0.0}};
    double spot = kl_divergence(unit);
    if (std::abs(spot - 0.5) >= kKlExactTol)
        return fail("kl(mu=1, logvar=0) = " + fmt(spot) + ", want 0.5");

    Rng rng(404);
    double lowest = 0.0;
    for (int i = 0; i < 10000; ++i) {
        GaussianLatent latent{1, 4, {}, {}};
        for (int j = 0; j < 4; ++j) {
            latent.mu.push_back(rng.uniform(-3.0, 3.0));
            latent.logvar.push_back(rng.uniform(-5.0, 5.0));
        }
        double kl = kl_divergence(latent);
        lowest = std::min(lowest, kl);
        if (kl < kKlFloor)
            return fail("negative kl " + fmt(kl) + " at sample " + std::to_string(i));
    }
    return pass("spot check exact, 10000 random latents non-negative (min " + fmt(lowest) + ")");
}

Outcome training_beats_mean_predictor() {
    auto start = std::chrono::steady_clock::now();
    Dataset ds = standardized_synth(512, 1, 0.0, 505);
    double baseline = mean_predictor_mse(ds);

    VaeConfig vcfg;
    vcfg.in_channels = 1;
    vcfg.latent_dim = 16;
    TrainConfig tcfg;
    tcfg.epochs = 30;
    tcfg.seed = 506;

    TrainResult first = train(ds, vcfg, tcfg);
    TrainResult second = train(ds, vcfg, tcfg);
    double elapsed = seconds_since(start);

    auto pa = first.model.params();
    auto pb = second.model.params();
    for (size_t i = 0; i < pa.size(); ++i)
        if (*pa[i].second != *pb[i].second)
            return fail("rerun diverged in parameter block " + pa[i].first);
    if (first.history.size() != second.history.size())
        return fail("rerun produced a different history length");
    for (size_t i = 0; i < first.history.size(); ++i)
        if (first.history[i].train_loss != second.history[i].train_loss ||
            first.history[i].val_loss != second.history[i].val_loss)
            return fail("rerun diverged at epoch " + std::to_string(i));

    double final_recon = first.history.back().val_recon;
    if (!(final_recon < kTrainFactor * baseline))
        return fail("validation recon " + fmt(final_recon) + " not below " + fmt(kTrainFactor) +
                    " * mean-predictor " + fmt(baseline));
    if (elapsed >= kTrainTimeLimit)
        return fail("took " + fmt(elapsed) + "s, limit " + fmt(kTrainTimeLimit) + "s");
    return pass("val recon " + fmt(final_recon) + " vs mean-predictor " + fmt(baseline) +
                ", rerun bit-identical, " + fmt(elapsed) + "s");
}

Outcome vae_wins_low_budgets() {
    auto start = std::chrono::steady_clock::now();
    Dataset ds = standardized_synth(96, 12, 0.0, 606);

    WaveletSpec spec{WaveletFamily::Daubechies4,
                     auto_levels(1000, WaveletFamily::Daubechies4),
                     BoundaryRule::PeriodicExtension};
    VaeConfig vcfg;
    vcfg.in_channels = 12;
    TrainConfig tcfg;
    tcfg.epochs = 25;
    tcfg.batch_size = 16;
    tcfg.seed = 607;

    const Method methods[] = {Method::Vae, Method::WaveletGlobal};
    const double fractions[] = {0.005, 0.01, 0.02};
    auto rows = run_compression_benchmark(ds, methods, fractions, spec,
                                          training_vae_source(ds, vcfg, tcfg), "synthetic");

    int wins = 0;
    std::string detail;
    for (size_t i = 0; i < 3; ++i) {
        double vae_mse = rows[i].mse;
        double global_mse = rows[3 + i].mse;
        if (vae_mse < global_mse) ++wins;
        if (!detail.empty()) detail += ", ";
        detail += fmt(fractions[i]) + ": vae " + fmt(vae_mse) + " vs global " + fmt(global_mse);
    }
    double elapsed = seconds_since(start);
    if (wins < 2) return fail("only " + std::to_string(wins) + " of 3 budgets won (" + detail + ")");
    return pass(std::to_string(wins) + " of 3 low budgets won (" + detail + "), " + fmt(elapsed) +
                "s");
}

Outcome noise_robustness() {
    auto start = std::chrono::steady_clock::now();
    Dataset ds = standardized_synth(128, 1, 0.0, 707);

    VaeConfig vcfg;
    vcfg.in_channels = 1;
    vcfg.latent_dim = 16;
    TrainConfig tcfg;
    tcfg.epochs = 15;
    tcfg.seed = 708;

    NoiseExperiment exp = run_noise_experiment(ds, NoiseSpec{0.2, 709}, vcfg, tcfg);

    double clean = exp.results[0].mse;
    double noisy_test = exp.results[1].mse;
    double noisy_train = exp.results[2].mse;
    for (double v : {clean, noisy_test, noisy_train})
        if (!std::isfinite(v)) return fail("non-finite regime MSE");

    double ratio = noisy_test / clean;
    if (!(ratio < kNoiseRatioMax))
        return fail("noisy-test/clean-test ratio " + fmt(ratio) + " >= " + fmt(kNoiseRatioMax));

    if (exp.noisy_history.empty()) return fail("noisy training produced no history");
    for (const auto& e : exp.noisy_history)
        if (!std::isfinite(e.train_loss) || !std::isfinite(e.val_loss))
            return fail("non-finite noisy training loss");
    double first_loss = exp.noisy_history.front().train_loss;
    double last_loss = exp.noisy_history.back().train_loss;
    if (!(last_loss < first_loss))
        return fail("noisy training loss did not decrease: " + fmt(first_loss) + " -> " +
                    fmt(last_loss));

    double elapsed = seconds_since(start);
    return pass("regime ratio " + fmt(ratio) + ", noisy train loss " + fmt(first_loss) + " -> " +
                fmt(last_loss) + ", " + fmt(elapsed) + "s");
}

Outcome anomaly_detection() {
    auto start = std::chrono::steady_clock::now();
    Dataset ds = standardized_synth(200, 1, 0.3, 808);

    Dataset train_pool, validation, test;
    for (int i = 0; i < 100; ++i) train_pool.records.push_back(ds.records[size_t(i)]);
    for (int i = 100; i < 150; ++i) validation.records.push_back(ds.records[size_t(i)]);
    for (int i = 150; i < 200; ++i) test.records.push_back(ds.records[size_t(i)]);

    Dataset train_normal;
    for (const auto& rec : train_pool.records)
        if (rec.label == Label::Normal) train_normal.records.push_back(rec);

    VaeConfig vcfg;
    vcfg.in_channels = 1;
    vcfg.latent_dim = 16;
    TrainConfig tcfg;
    tcfg.epochs = 15;
    tcfg.batch_size = 16;
    tcfg.seed = 809;
    TrainResult result = train(train_normal, vcfg, tcfg);

    auto val_errors = reconstruction_errors(result.model, validation);
    auto [vn, va] = split_errors_by_label(validation, val_errors);
    double vae_threshold = choose_threshold(vn, va);
    AnomalyOutcome vae_outcome = detect_anomalies(result.model, test, vae_threshold);
    double vae_ba = vae_outcome.confusion.balanced_accuracy();

    WaveletSpec spec{WaveletFamily::Daubechies4,
                     auto_levels(1000, WaveletFamily::Daubechies4),
                     BoundaryRule::PeriodicExtension};
    EnergyProfile profile = energy_profile(train_normal, spec);
    int n = budget_for_fraction(0.02, 1, padded_length(1000, spec.levels));
    auto wval = wavelet_errors(validation, spec, profile, n);
    auto [wn, wa] = split_errors_by_label(validation, wval);
    double wavelet_threshold = choose_threshold(wn, wa);
    AnomalyOutcome wavelet_outcome = wavelet_anomaly_baseline(test, spec, profile, n,
                                                              wavelet_threshold);
    double wavelet_ba = wavelet_outcome.confusion.balanced_accuracy();

    double elapsed = seconds_since(start);
    if (!(vae_ba > kAnomalyFloor))
        return fail("vae balanced accuracy " + fmt(vae_ba) + " <= " + fmt(kAnomalyFloor));
    if (vae_ba < wavelet_ba)
        return fail("vae balanced accuracy " + fmt(vae_ba) + " below wavelet baseline " +
                    fmt(wavelet_ba));
    return pass("vae " + fmt(vae_ba) + " vs wavelet " + fmt(wavelet_ba) + " balanced accuracy, " +
                fmt(elapsed) + "s");
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(TSC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Header plus at least one row; every row has the field count, numeric where
// expected.
std::string check_csv(const fs::path& path, const std::string& header,
                      const std::vector<int>& numeric_fields) {
    std::string text = slurp(path);
    if (text.empty()) return path.filename().string() + " is empty";
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    if (line != header) return path.filename().string() + " header is '" + line + "'";

    size_t expected = size_t(std::count(header.begin(), header.end(), ',')) + 1;
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        std::vector<std::string> fields;
        std::string field;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(field);
                field.clear();
            } else {
                field += c;
            }
        }
        fields.push_back(field);
        if (fields.size() != expected)
            return path.filename().string() + " row with " + std::to_string(fields.size()) +
                   " fields";
        for (int idx : numeric_fields) {
            try {
                double v = std::stod(fields[size_t(idx)]);
                if (!std::isfinite(v)) return path.filename().string() + " non-finite field";
            } catch (const std::exception&) {
                return path.filename().string() + " non-numeric field '" + fields[size_t(idx)] +
                       "'";
            }
        }
    }
    if (rows == 0) return path.filename().string() + " has no data rows";
    return "";
}

std::string run_pipeline(const fs::path& dir) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string out = " --out " + dir.string();
    std::string data = (dir / "data.tsc").string();
    std::string model_flags = " --latent 8 --crop 128 --epochs 6 --batch 8 --seed 3";

    if (run_cli("synth --count 48 --channels 2 --length 512 --anomaly-fraction 0.25 --seed 11 "
                "--name data" +
                out) != 0)
        return "synth failed";
    if (run_cli("vae-train --input " + data + model_flags + out) != 0) return "vae-train failed";
    if (run_cli("bench --input " + data +
                " --methods vae,global,oracle,fpca --fractions 0.03125 --checkpoint " +
                (dir / "model.vae1").string() + " --svg --crop 128" + out) != 0)
        return "bench failed";
    if (run_cli("anomaly --input " + data + model_flags +
                " --split-seed 2 --wavelet-fraction 0.02" + out) != 0)
        return "anomaly failed";

    std::string err = check_csv(dir / "bench.csv", "dataset,method,kept_fraction,mse,regime",
                                {2, 3});
    if (!err.empty()) return err;
    err = check_csv(dir / "anomaly.csv", "detector,tp,fp,tn,fn,balanced_accuracy",
                    {1, 2, 3, 4, 5});
    if (!err.empty()) return err;

    std::string svg = slurp(dir / "bench.svg");
    if (svg.rfind("<?xml", 0) != 0 || svg.find("</svg>") == std::string::npos)
        return "bench.svg is not a standalone svg";
    return "";
}

Outcome cli_pipeline() {
    auto start = std::chrono::steady_clock::now();
    fs::path base = fs::temp_directory_path() / "tsc_acceptance_cli";
    fs::path a = base / "a", b = base / "b";

    std::string err = run_pipeline(a);
    if (!err.empty()) return fail("first run: " + err);
    err = run_pipeline(b);
    if (!err.empty()) return fail("second run: " + err);

    for (const char* name : {"data.tsc", "model.vae1", "bench.csv", "bench.svg", "anomaly.csv"}) {
        if (slurp(a / name) != slurp(b / name))
            return fail(std::string(name) + " differs between reruns");
        if (slurp(a / name).empty()) return fail(std::string(name) + " is empty");
    }
    double elapsed = seconds_since(start);
    return pass("synth/vae-train/bench/anomaly byte-identical across reruns, " + fmt(elapsed) +
                "s");
}

Outcome at_scale_sweep() {
    const char* env = std::getenv("TSC_PTBXL_PATH");
    if (env == nullptr || env[0] == '\0')
        return skip("set TSC_PTBXL_PATH to a dataset file to run the at-scale sweep");

    auto start = std::chrono::steady_clock::now();
    Dataset ds = load_dataset(env, detect_format(env));
    if (ds.sampling_rate() != 100.0) {
        Dataset resampled;
        for (const auto& rec : ds.records) resampled.records.push_back(resample(rec, 100.0));
        ds = std::move(resampled);
    }
    ds = standardize(ds).first;

    WaveletSpec spec{WaveletFamily::Daubechies4,
                     auto_levels(ds.length(), WaveletFamily::Daubechies4),
                     BoundaryRule::PeriodicExtension};
    const Method methods[] = {Method::WaveletGlobal, Method::WaveletOracle, Method::Fpca};
    const double fractions[] = {0.005, 0.02, 0.33};
    auto rows = run_compression_benchmark(ds, methods, fractions, spec, nullptr, "ptbxl");

    std::string detail;
    for (size_t i = 0; i < 3; ++i) {
        if (!(rows[3 + i].mse <= rows[i].mse + kOracleSlack))
            return fail("oracle above global at fraction " + fmt(fractions[i]));
        if (!detail.empty()) detail += ", ";
        detail += fmt(fractions[i]) + ": global " + fmt(rows[i].mse) + " oracle " +
                  fmt(rows[3 + i].mse);
    }
    return pass(std::to_string(ds.count()) + " records (" + detail + "), " +
                fmt(seconds_since(start)) + "s");
}

}  // namespace

int main(int argc, char** argv) {
    struct Entry {
        int number;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {1, wavelet_invertibility},
        {2, oracle_dominance},
        {3, gradients_are_exact},
        {4, kl_closed_form},
        {5, training_beats_mean_predictor},
        {6, vae_wins_low_budgets},
        {7, noise_robustness},
        {8, anomaly_detection},
        {9, cli_pipeline},
        {10, at_scale_sweep},
    };

    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& entry : entries) {
        if (!wanted.empty() &&
            std::find(wanted.begin(), wanted.end(), entry.number) == wanted.end())
            continue;
        Outcome outcome;
        try {
            outcome = entry.run();
        } catch (const std::exception& e) {
            outcome = fail(std::string("unexpected exception: ") + e.what());
        }
        const char* tag = outcome.kind == Outcome::Pass   ? "PASS"
                          : outcome.kind == Outcome::Fail ? "FAIL"
                                                          : "SKIP";
        std::printf("[%d] %s %s\n", entry.number, tag, outcome.detail.c_str());
        std::fflush(stdout);
        failures += outcome.kind == Outcome::Fail;
    }
    return failures;
}
