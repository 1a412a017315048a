#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsc.h"

namespace fs = std::filesystem;

namespace {

// Runtime failure, exit 1.
struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad invocation or config, exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(tsc_status status) {
    if (status != TSC_OK) throw CliError(tsc_last_error());
}

template <typename T, void (*Free)(T*)>
class Handle {
  public:
    Handle() = default;
    ~Handle() { Free(ptr_); }
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    Handle(Handle&& other) noexcept : ptr_(std::exchange(other.ptr_, nullptr)) {}
    Handle& operator=(Handle&& other) noexcept {
        if (this != &other) {
            Free(ptr_);
            ptr_ = std::exchange(other.ptr_, nullptr);
        }
        return *this;
    }
    T** out() {
        Free(ptr_);
        ptr_ = nullptr;
        return &ptr_;
    }
    T* get() const { return ptr_; }

  private:
    T* ptr_ = nullptr;
};

using DatasetPtr = Handle<tsc_dataset, tsc_dataset_free>;
using VaePtr = Handle<tsc_vae, tsc_vae_free>;
using FpcaPtr = Handle<tsc_fpca, tsc_fpca_free>;
using ResultsPtr = Handle<tsc_results, tsc_results_free>;
using DetectorsPtr = Handle<tsc_detectors, tsc_detectors_free>;

constexpr const char* kDefaultFractions = "0.005,0.01,0.02,0.06,0.125,0.33";

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            out.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    out.push_back(current);
    for (const auto& item : out)
        if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
    return out;
}

std::vector<double> parse_fractions(const std::string& text) {
    std::vector<double> out;
    for (const auto& token : split_list(text)) {
        size_t pos = 0;
        double value = 0.0;
        try {
            value = std::stod(token, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != token.size()) throw UsageError("invalid number '" + token + "' in list");
        out.push_back(value);
    }
    return out;
}

fs::path out_file(const std::string& dir, const std::string& name, const char* ext) {
    fs::path d = dir.empty() ? fs::path(".") : fs::path(dir);
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec) throw CliError("cannot create output directory '" + d.string() + "': " + ec.message());
    return d / (name + ext);
}

const char* data_ext(const std::string& format) { return format == "csv" ? ".csv" : ".tsc"; }

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void apply_threads(int threads) {
    if (threads >= 0) {
        check(tsc_set_thread_count(threads));
        return;
    }
    if (const char* env = std::getenv("TSC_THREADS")) {
        char* end = nullptr;
        long value = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || value < 0)
            throw CliError("invalid TSC_THREADS value '" + std::string(env) + "'");
        check(tsc_set_thread_count(int(value)));
    }
}

struct IoFlags {
    std::string out_dir = ".";
    std::string name;
    int threads = -1;
};

void add_io_flags(CLI::App* sub, IoFlags& io, const char* default_name) {
    io.name = default_name;
    sub->add_option("--out", io.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--name", io.name, "Output file stem")->capture_default_str();
    sub->add_option("--threads", io.threads, "Worker thread cap (0 = machine default)");
}

struct ModelFlags {
    tsc_vae_config vae;
    tsc_train_config train;
};

void add_model_flags(CLI::App* sub, ModelFlags& mf) {
    tsc_vae_config_default(&mf.vae);
    tsc_train_config_default(&mf.train);
    sub->add_option("--latent", mf.vae.latent_dim, "Latent dimensions")->capture_default_str();
    sub->add_option("--crop", mf.vae.crop_len, "Training crop length")->capture_default_str();
    sub->add_option("--kl-beta", mf.train.kl_beta, "KL weight")->capture_default_str();
    sub->add_option("--epochs", mf.train.epochs, "Training epochs")->capture_default_str();
    sub->add_option("--batch", mf.train.batch_size, "Batch size")->capture_default_str();
    sub->add_option("--lr", mf.train.learning_rate, "Adam learning rate")->capture_default_str();
    sub->add_option("--val-fraction", mf.train.validation_fraction, "Validation split fraction")
        ->capture_default_str();
    sub->add_option("--resample-low", mf.train.resample_low, "Lower resampling factor")
        ->capture_default_str();
    sub->add_option("--resample-high", mf.train.resample_high, "Upper resampling factor")
        ->capture_default_str();
    sub->add_option("--seed", mf.train.seed, "Training seed")->capture_default_str();
}

DatasetPtr load_input(const std::string& path, const std::string& format) {
    DatasetPtr ds;
    check(tsc_dataset_load(path.c_str(), format.c_str(), ds.out()));
    return ds;
}

void print_rows(const tsc_results* results) {
    size_t count = tsc_results_count(results);
    for (size_t i = 0; i < count; ++i) {
        tsc_result_row row{};
        check(tsc_results_row(results, i, &row));
        std::cout << row.dataset << " " << row.method << " @" << row.kept_fraction
                  << ": mse=" << row.mse;
        if (row.regime[0] != '\0') std::cout << " (" << row.regime << ")";
        std::cout << "\n";
    }
}

void register_synth(CLI::App& app) {
    struct Opts {
        tsc_synth_config cfg;
        std::string format = "raw";
        IoFlags io;
    };
    auto o = std::make_shared<Opts>();
    tsc_synth_config_default(&o->cfg);
    CLI::App* sub = app.add_subcommand("synth", "Generate a synthetic ECG-like dataset");
    sub->add_option("--count", o->cfg.count, "Records to generate")->capture_default_str();
    sub->add_option("--channels", o->cfg.channels, "Channels per record")->capture_default_str();
    sub->add_option("--length", o->cfg.length, "Samples per channel")->capture_default_str();
    sub->add_option("--rate", o->cfg.sampling_rate, "Sampling rate in Hz")->capture_default_str();
    sub->add_option("--hr-low", o->cfg.heart_rate_low, "Heart rate lower bound (bpm)")
        ->capture_default_str();
    sub->add_option("--hr-high", o->cfg.heart_rate_high, "Heart rate upper bound (bpm)")
        ->capture_default_str();
    sub->add_option("--anomaly-fraction", o->cfg.anomaly_fraction, "Fraction of anomalous records")
        ->capture_default_str();
    sub->add_option("--seed", o->cfg.seed, "Generator seed")->capture_default_str();
    sub->add_option("--format", o->format, "Output format (raw or csv)")
        ->capture_default_str()
        ->check(CLI::IsMember({"raw", "csv"}));
    add_io_flags(sub, o->io, "synth");
    sub->callback([o] {
        apply_threads(o->io.threads);
        DatasetPtr ds;
        check(tsc_synth(&o->cfg, ds.out()));
        fs::path path = out_file(o->io.out_dir, o->io.name, data_ext(o->format));
        check(tsc_dataset_save(ds.get(), path.c_str(), o->format.c_str()));
        std::cout << "wrote " << path.string() << " (" << tsc_dataset_count(ds.get())
                  << " records, " << tsc_dataset_channels(ds.get()) << "x"
                  << tsc_dataset_length(ds.get()) << " @ "
                  << tsc_dataset_sampling_rate(ds.get()) << " Hz)\n";
    });
}

void register_preprocess(CLI::App& app) {
    struct Opts {
        std::string input;
        std::string in_format = "auto";
        std::string out_format = "raw";
        double resample_rate = 0.0;
        bool standardize = false;
        double noise = 0.0;
        uint64_t noise_seed = 0;
        IoFlags io;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub =
        app.add_subcommand("preprocess", "Resample, standardize, or add noise to a dataset");
    sub->add_option("--input", o->input, "Input dataset")->required();
    sub->add_option("--input-format", o->in_format, "Input format (auto, raw, csv)")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "raw", "csv"}));
    sub->add_option("--resample", o->resample_rate, "Target sampling rate in Hz (0 keeps)")
        ->capture_default_str();
    sub->add_flag("--standardize", o->standardize, "Per-channel z-score over the dataset");
    sub->add_option("--noise", o->noise, "Gaussian noise variance ratio")->capture_default_str();
    sub->add_option("--noise-seed", o->noise_seed, "Noise seed")->capture_default_str();
    sub->add_option("--format", o->out_format, "Output format (raw or csv)")
        ->capture_default_str()
        ->check(CLI::IsMember({"raw", "csv"}));
    add_io_flags(sub, o->io, "preprocessed");
    sub->callback([o] {
        apply_threads(o->io.threads);
        DatasetPtr ds = load_input(o->input, o->in_format);
        if (o->resample_rate > 0.0) {
            DatasetPtr next;
            check(tsc_dataset_resample(ds.get(), o->resample_rate, next.out()));
            ds = std::move(next);
        }
        if (o->standardize) {
            DatasetPtr next;
            check(tsc_dataset_standardize(ds.get(), nullptr, nullptr, next.out()));
            ds = std::move(next);
        }
        if (o->noise > 0.0) {
            DatasetPtr next;
            check(tsc_dataset_add_noise(ds.get(), o->noise, o->noise_seed, next.out()));
            ds = std::move(next);
        }
        fs::path path = out_file(o->io.out_dir, o->io.name, data_ext(o->out_format));
        check(tsc_dataset_save(ds.get(), path.c_str(), o->out_format.c_str()));
        std::cout << "wrote " << path.string() << "\n";
    });
}

void register_wavelet(CLI::App& app) {
    struct Opts {
        std::string input;
        std::string id;
        std::string family = "db4";
        int levels = 0;
        std::string method = "oracle";
        std::string fractions = "0.02";
        bool summary_only = false;
        bool svg = false;
        IoFlags io;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub =
        app.add_subcommand("wavelet", "Wavelet compression sweep (global or oracle selection)");
    sub->add_option("--input", o->input, "Input dataset")->required();
    sub->add_option("--id", o->id, "Dataset id for the report (default: input stem)");
    sub->add_option("--family", o->family, "Wavelet family (haar or db4)")
        ->capture_default_str()
        ->check(CLI::IsMember({"haar", "db4"}));
    sub->add_option("--levels", o->levels, "Decomposition levels (0 = automatic)")
        ->capture_default_str();
    sub->add_option("--method", o->method, "Selection rule (global or oracle)")
        ->capture_default_str()
        ->check(CLI::IsMember({"global", "oracle"}));
    sub->add_option("--fractions,--fraction", o->fractions, "Comma-separated kept fractions")
        ->capture_default_str();
    sub->add_flag("--summary-only", o->summary_only, "Skip the per-record rows");
    sub->add_flag("--svg", o->svg, "Also write an SVG chart of the summary rows");
    add_io_flags(sub, o->io, "wavelet");
    sub->callback([o] {
        apply_threads(o->io.threads);
        DatasetPtr ds = load_input(o->input, "auto");
        std::string id = o->id.empty() ? stem_of(o->input) : o->id;
        std::vector<double> fractions = parse_fractions(o->fractions);
        ResultsPtr results;
        check(tsc_wavelet_sweep(ds.get(), id.c_str(), o->family.c_str(), o->levels,
                                o->method.c_str(), fractions.data(), fractions.size(),
                                o->summary_only ? 0 : 1, results.out()));
        fs::path csv = out_file(o->io.out_dir, o->io.name, ".csv");
        check(tsc_results_write_csv(results.get(), csv.c_str()));
        std::cout << "wrote " << csv.string() << "\n";
        if (o->svg) {
            ResultsPtr summary;
            if (!o->summary_only)
                check(tsc_wavelet_sweep(ds.get(), id.c_str(), o->family.c_str(), o->levels,
                                        o->method.c_str(), fractions.data(), fractions.size(), 0,
                                        summary.out()));
            fs::path svg = out_file(o->io.out_dir, o->io.name, ".svg");
            check(tsc_results_write_svg(o->summary_only ? results.get() : summary.get(),
                                        svg.c_str()));
            std::cout << "wrote " << svg.string() << "\n";
        }
    });
}

void register_fpca(CLI::App& app) {
    struct Opts {
        std::string input;
        std::string id;
        std::string fractions = kDefaultFractions;
        int max_components = 0;
        int basis = 0;
        bool svg = false;
        IoFlags io;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("fpca", "Functional PCA compression sweep");
    sub->add_option("--input", o->input, "Input dataset")->required();
    sub->add_option("--id", o->id, "Dataset id for the report (default: input stem)");
    sub->add_option("--fractions", o->fractions, "Comma-separated kept fractions")
        ->capture_default_str();
    sub->add_option("--max-components", o->max_components, "Component cap (0 = unlimited)")
        ->capture_default_str();
    sub->add_option("--basis", o->basis, "Also write the first N basis curves as a dataset");
    sub->add_flag("--svg", o->svg, "Also write an SVG chart");
    add_io_flags(sub, o->io, "fpca");
    sub->callback([o] {
        apply_threads(o->io.threads);
        DatasetPtr ds = load_input(o->input, "auto");
        std::string id = o->id.empty() ? stem_of(o->input) : o->id;
        std::vector<double> fractions = parse_fractions(o->fractions);
        ResultsPtr results;
        check(tsc_fpca_sweep(ds.get(), id.c_str(), fractions.data(), fractions.size(),
                             o->max_components, results.out()));
        fs::path csv = out_file(o->io.out_dir, o->io.name, ".csv");
        check(tsc_results_write_csv(results.get(), csv.c_str()));
        std::cout << "wrote " << csv.string() << "\n";
        if (o->svg) {
            fs::path svg = out_file(o->io.out_dir, o->io.name, ".svg");
            check(tsc_results_write_svg(results.get(), svg.c_str()));
            std::cout << "wrote " << svg.string() << "\n";
        }
        if (o->basis > 0) {
            FpcaPtr basis;
            check(tsc_fpca_fit(ds.get(), o->basis, basis.out()));
            DatasetPtr curves;
            check(tsc_fpca_basis_dataset(basis.get(), curves.out()));
            fs::path path = out_file(o->io.out_dir, o->io.name + "-basis", ".csv");
            check(tsc_dataset_save(curves.get(), path.c_str(), "csv"));
            std::cout << "wrote " << path.string() << "\n";
        }
    });
}

void register_vae_train(CLI::App& app) {
    struct Opts {
        std::string input;
        ModelFlags mf;
        IoFlags io;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand("vae-train", "Train a convolutional VAE on a dataset");
    sub->add_option("--input", o->input, "Training dataset")->required();
    add_model_flags(sub, o->mf);
    add_io_flags(sub, o->io, "model");
    sub->callback([o] {
        apply_threads(o->io.threads);
        DatasetPtr ds = load_input(o->input, "auto");
        o->mf.vae.in_channels = tsc_dataset_channels(ds.get());
        VaePtr vae;
        tsc_train_stats stats{};
        check(tsc_vae_train(ds.get(), &o->mf.vae, &o->mf.train, vae.out(), &stats));
        fs::path path = out_file(o->io.out_dir, o->io.name, ".vae1");
        check(tsc_vae_save(vae.get(), path.c_str()));
        std::cout << "wrote " << path.string() << " (" << tsc_vae_parameter_count(vae.get())
                  << " parameters)\n";
        std::cout << "best epoch " << stats.best_epoch << ": val loss " << stats.best_val_loss
                  << ", val recon mse " << stats.best_val_recon << ", final train loss "
                  << stats.final_train_loss << "\n";
    });
}

void register_vae_eval(CLI::App& app) {
    struct Opts {
        std::string model;
        std::string inputs;
        double rate = 0.0;
        bool reconstruct = false;
        IoFlags io;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub =
        app.add_subcommand("vae-eval", "Evaluate a trained VAE on one or more datasets");
    sub->add_option("--model", o->model, "Checkpoint path")->required();
    sub->add_option("--input", o->inputs, "Comma-separated dataset paths")->required();
    sub->add_option("--rate", o->rate, "Training sampling rate in Hz (0 = first input's rate)")
        ->capture_default_str();
    sub->add_flag("--reconstruct", o->reconstruct, "Also write reconstruction datasets");
    add_io_flags(sub, o->io, "eval");
    sub->callback([o] {
        apply_threads(o->io.threads);
        VaePtr vae;
        check(tsc_vae_load(o->model.c_str(), vae.out()));
        std::vector<std::string> paths = split_list(o->inputs);
        std::vector<DatasetPtr> sets;
        std::vector<std::string> ids;
        for (const auto& path : paths) {
            sets.push_back(load_input(path, "auto"));
            ids.push_back(stem_of(path));
        }
        double rate = o->rate > 0.0 ? o->rate : tsc_dataset_sampling_rate(sets[0].get());
        std::vector<const tsc_dataset*> raw;
        std::vector<const char*> names;
        for (size_t i = 0; i < sets.size(); ++i) {
            raw.push_back(sets[i].get());
            names.push_back(ids[i].c_str());
        }
        ResultsPtr results;
        check(tsc_cross_eval(vae.get(), raw.data(), names.data(), raw.size(), rate,
                             results.out()));
        fs::path csv = out_file(o->io.out_dir, o->io.name, ".csv");
        check(tsc_results_write_csv(results.get(), csv.c_str()));
        std::cout << "wrote " << csv.string() << "\n";
        print_rows(results.get());
        if (o->reconstruct) {
            for (size_t i = 0; i < sets.size(); ++i) {
                DatasetPtr recon;
                check(tsc_vae_reconstruct(vae.get(), sets[i].get(), recon.out()));
                fs::path path = out_file(o->io.out_dir, ids[i] + "-recon", ".tsc");
                check(tsc_dataset_save(recon.get(), path.c_str(), "raw"));
                std::cout << "wrote " << path.string() << "\n";
            }
        }
    });
}

void register_bench(CLI::App& app) {
    struct Opts {
        std::string input;
        std::string id;
        std::string methods = "vae,global,oracle,fpca";
        std::string fractions = kDefaultFractions;
        std::string family = "db4";
        int levels = 0;
        std::string checkpoints;
        bool reference = false;
        bool svg = false;
        ModelFlags mf;
        IoFlags io;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub =
        app.add_subcommand("bench", "Compression-rate sweep across methods on one dataset");
    sub->add_option("--input", o->input, "Input dataset")->required();
    sub->add_option("--id", o->id, "Dataset id for the report (default: input stem)");
    sub->add_option("--methods", o->methods, "Comma-separated: vae, global, oracle, fpca")
        ->capture_default_str();
    sub->add_option("--fractions", o->fractions, "Comma-separated kept fractions")
        ->capture_default_str();
    sub->add_option("--family", o->family, "Wavelet family (haar or db4)")
        ->capture_default_str()
        ->check(CLI::IsMember({"haar", "db4"}));
    sub->add_option("--levels", o->levels, "Decomposition levels (0 = automatic)")
        ->capture_default_str();
    sub->add_option("--checkpoint", o->checkpoints,
                    "Comma-separated VAE checkpoints matched to fractions by latent budget");
    sub->add_flag("--reference", o->reference, "Append the published reference rows");
    sub->add_flag("--svg", o->svg, "Also write an SVG chart");
    add_model_flags(sub, o->mf);
    add_io_flags(sub, o->io, "bench");
    sub->callback([o] {
        apply_threads(o->io.threads);
        DatasetPtr ds = load_input(o->input, "auto");
        std::string id = o->id.empty() ? stem_of(o->input) : o->id;
        std::vector<double> fractions = parse_fractions(o->fractions);
        std::vector<std::string> methods = split_list(o->methods);
        std::vector<const char*> method_ptrs;
        for (const auto& m : methods) method_ptrs.push_back(m.c_str());
        std::vector<std::string> checkpoints;
        std::vector<const char*> checkpoint_ptrs;
        if (!o->checkpoints.empty()) {
            checkpoints = split_list(o->checkpoints);
            for (const auto& c : checkpoints) checkpoint_ptrs.push_back(c.c_str());
        }
        o->mf.vae.in_channels = tsc_dataset_channels(ds.get());
        ResultsPtr results;
        check(tsc_bench_run(ds.get(), id.c_str(), method_ptrs.data(), method_ptrs.size(),
                            fractions.data(), fractions.size(), o->family.c_str(), o->levels,
                            &o->mf.vae, &o->mf.train, checkpoint_ptrs.data(),
                            checkpoint_ptrs.size(), results.out()));
        if (o->reference) check(tsc_results_append_reference(results.get()));
        fs::path csv = out_file(o->io.out_dir, o->io.name, ".csv");
        check(tsc_results_write_csv(results.get(), csv.c_str()));
        std::cout << "wrote " << csv.string() << "\n";
        if (o->svg) {
            fs::path svg = out_file(o->io.out_dir, o->io.name, ".svg");
            check(tsc_results_write_svg(results.get(), svg.c_str()));
            std::cout << "wrote " << svg.string() << "\n";
        }
        print_rows(results.get());
    });
}

void register_noise(CLI::App& app) {
    struct Opts {
        std::string input;
        std::string id;
        double ratio = 0.2;
        uint64_t noise_seed = 0;
        bool svg = false;
        ModelFlags mf;
        IoFlags io;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand(
        "noise", "Noise robustness: clean/noisy training and test regimes for the VAE");
    sub->add_option("--input", o->input, "Input dataset (clean)")->required();
    sub->add_option("--id", o->id, "Dataset id for the report (default: input stem)");
    sub->add_option("--ratio", o->ratio, "Noise variance ratio")->capture_default_str();
    sub->add_option("--noise-seed", o->noise_seed, "Noise seed")->capture_default_str();
    sub->add_flag("--svg", o->svg, "Also write an SVG chart");
    add_model_flags(sub, o->mf);
    add_io_flags(sub, o->io, "noise");
    sub->callback([o] {
        apply_threads(o->io.threads);
        DatasetPtr ds = load_input(o->input, "auto");
        std::string id = o->id.empty() ? stem_of(o->input) : o->id;
        o->mf.vae.in_channels = tsc_dataset_channels(ds.get());
        ResultsPtr results;
        check(tsc_noise_run(ds.get(), id.c_str(), o->ratio, o->noise_seed, &o->mf.vae,
                            &o->mf.train, results.out()));
        fs::path csv = out_file(o->io.out_dir, o->io.name, ".csv");
        check(tsc_results_write_csv(results.get(), csv.c_str()));
        std::cout << "wrote " << csv.string() << "\n";
        if (o->svg) {
            fs::path svg = out_file(o->io.out_dir, o->io.name, ".svg");
            check(tsc_results_write_svg(results.get(), svg.c_str()));
            std::cout << "wrote " << svg.string() << "\n";
        }
        print_rows(results.get());
    });
}

void register_anomaly(CLI::App& app) {
    struct Opts {
        std::string input;
        double split_train = 0.5;
        double split_val = 0.5;
        uint64_t split_seed = 0;
        double wavelet_fraction = 0.02;
        std::string family = "db4";
        int levels = 0;
        ModelFlags mf;
        IoFlags io;
    };
    auto o = std::make_shared<Opts>();
    CLI::App* sub = app.add_subcommand(
        "anomaly", "Reconstruction-error anomaly detection against a wavelet baseline");
    sub->add_option("--input", o->input, "Labeled dataset to split")->required();
    sub->add_option("--split-train", o->split_train, "Fraction of records for training")
        ->capture_default_str();
    sub->add_option("--split-val", o->split_val, "Fraction of the remainder for validation")
        ->capture_default_str();
    sub->add_option("--split-seed", o->split_seed, "Split shuffle seed")->capture_default_str();
    sub->add_option("--wavelet-fraction", o->wavelet_fraction, "Baseline kept fraction")
        ->capture_default_str();
    sub->add_option("--family", o->family, "Wavelet family (haar or db4)")
        ->capture_default_str()
        ->check(CLI::IsMember({"haar", "db4"}));
    sub->add_option("--levels", o->levels, "Decomposition levels (0 = automatic)")
        ->capture_default_str();
    add_model_flags(sub, o->mf);
    add_io_flags(sub, o->io, "anomaly");
    sub->callback([o] {
        apply_threads(o->io.threads);
        DatasetPtr ds = load_input(o->input, "auto");
        DatasetPtr train_pool, rest;
        check(tsc_dataset_split(ds.get(), o->split_train, o->split_seed, train_pool.out(),
                                rest.out()));
        DatasetPtr validation, test;
        check(tsc_dataset_split(rest.get(), o->split_val, o->split_seed + 1, validation.out(),
                                test.out()));
        DatasetPtr train_normal;
        check(tsc_dataset_filter_label(train_pool.get(), "normal", train_normal.out()));
        o->mf.vae.in_channels = tsc_dataset_channels(ds.get());
        double vae_threshold = 0.0, wavelet_threshold = 0.0;
        DetectorsPtr detectors;
        check(tsc_anomaly_run(train_normal.get(), validation.get(), test.get(), &o->mf.vae,
                              &o->mf.train, o->family.c_str(), o->levels, o->wavelet_fraction,
                              &vae_threshold, &wavelet_threshold, detectors.out()));
        fs::path csv = out_file(o->io.out_dir, o->io.name, ".csv");
        check(tsc_detectors_write_csv(detectors.get(), csv.c_str()));
        std::cout << "wrote " << csv.string() << "\n";
        size_t count = tsc_detectors_count(detectors.get());
        for (size_t i = 0; i < count; ++i) {
            tsc_detector_row row{};
            check(tsc_detectors_row(detectors.get(), i, &row));
            double threshold =
                std::string(row.detector) == "VAE" ? vae_threshold : wavelet_threshold;
            std::cout << row.detector << ": threshold " << threshold << ", tp=" << row.tp
                      << " fp=" << row.fp << " tn=" << row.tn << " fn=" << row.fn
                      << ", balanced accuracy " << row.balanced_accuracy << "\n";
        }
    });
}

std::vector<std::string> inject_config(std::vector<std::string> args) {
    if (args.empty()) return args;
    std::string config_path;
    for (size_t i = 1; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
            config_path = args[i + 1];
            args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + long(i));
        } else {
            ++i;
        }
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw CliError("cannot open config file '" + config_path + "'");
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw UsageError("config file '" + config_path + "' is not valid JSON: " +
                         std::string(e.what()));
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");

    // Config entries become flags placed before the command-line ones, so
    // explicit flags win.
    std::vector<std::string> injected;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        const std::string flag = "--" + it.key();
        const nlohmann::json& value = it.value();
        if (value.is_boolean()) {
            injected.push_back(flag + "=" + (value.get<bool>() ? "true" : "false"));
        } else if (value.is_string()) {
            injected.push_back(flag + "=" + value.get<std::string>());
        } else if (value.is_number()) {
            injected.push_back(flag + "=" + value.dump());
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& item : value) {
                if (!joined.empty()) joined += ',';
                joined += item.is_string() ? item.get<std::string>() : item.dump();
            }
            injected.push_back(flag + "=" + joined);
        } else {
            throw UsageError("config key '" + it.key() + "' has an unsupported value type");
        }
    }
    args.insert(args.begin() + 1, injected.begin(), injected.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-series compression workbench: synthetic ECG data, wavelet and FPCA "
                 "baselines, a convolutional VAE, and benchmark reports"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.footer("Each subcommand also accepts --config FILE with a JSON object of flag values;\n"
               "explicit flags override config entries.");

    register_synth(app);
    register_preprocess(app);
    register_wavelet(app);
    register_fpca(app);
    register_vae_train(app);
    register_vae_eval(app);
    register_bench(app);
    register_noise(app);
    register_anomaly(app);

    try {
        std::vector<std::string> args = inject_config({argv + 1, argv + argc});
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(int(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
