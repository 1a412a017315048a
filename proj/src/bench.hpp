#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "preprocess.hpp"
#include "record.hpp"
#include "train.hpp"
#include "vae.hpp"
#include "wavelet.hpp"

namespace tsc {

enum class Method { Vae, WaveletGlobal, WaveletOracle, Fpca };

const char* to_string(Method method);
Method method_from_string(const std::string& text);

struct CompressionResult {
    Method method = Method::Vae;
    double kept_fraction = 0.0;  // the requested sweep fraction, the row key
    double mse = 0.0;
    std::string dataset_id;
};

enum class NoiseRegime { CleanTrainCleanTest, CleanTrainNoisyTest, NoisyTrainNoisyTest };

const char* to_string(NoiseRegime regime);

struct NoiseExperimentResult {
    NoiseRegime regime = NoiseRegime::CleanTrainCleanTest;
    double kept_fraction = 0.0;
    double mse = 0.0;  // always against the clean target
};

struct ConfusionMatrix {
    int64_t tp = 0;
    int64_t fp = 0;
    int64_t tn = 0;
    int64_t fn = 0;

    int64_t total() const { return tp + fp + tn + fn; }
    double anomaly_recall() const;
    double normal_recall() const;
    double balanced_accuracy() const;
    // Percentages over the true class: {correctly predicted, missed}.
    std::array<double, 2> anomaly_row() const;
    std::array<double, 2> normal_row() const;
};

// Sweep grid: the low-budget regime plus the crossover region.
inline constexpr double kDefaultFractions[] = {0.005, 0.01, 0.02, 0.06, 0.125, 0.33};

// max(1, round(fraction * channels * length)), clamped to the total.
int budget_for_fraction(double fraction, int channels, int length);

// Mean squared difference over all channels and samples; shapes must match.
double mse(const Record& a, const Record& b);

// Supplies a trained model for the latent budget a sweep fraction implies.
using VaeSource = std::function<Vae(double fraction)>;

// Source that trains on `dataset` (which must outlive the source), caching
// models by latent budget. The base config's latent_dim is replaced.
VaeSource training_vae_source(const Dataset& dataset, const VaeConfig& base,
                              const TrainConfig& tcfg);

// One result per (method, fraction). Wavelet budgets are fractions of the
// padded coefficient count, VAE budgets of channels * crop_len, FPCA budgets
// of channels * length capped at the dataset size.
std::vector<CompressionResult> run_compression_benchmark(const Dataset& dataset,
                                                         std::span<const Method> methods,
                                                         std::span<const double> fractions,
                                                         const WaveletSpec& wspec,
                                                         const VaeSource& vae_source,
                                                         const std::string& dataset_id);

// One trained model scored on several datasets, no retraining. Every dataset
// must already be at the model's training sampling rate.
std::vector<CompressionResult> run_cross_dataset_eval(const Vae& model,
                                                      std::span<const Dataset> datasets,
                                                      std::span<const std::string> ids,
                                                      double training_rate);

struct NoiseExperiment {
    std::vector<NoiseExperimentResult> results;  // one per regime, enum order
    std::vector<EpochStats> clean_history;
    std::vector<EpochStats> noisy_history;  // empty when variance_ratio is 0
};

// Trains on clean and noisy copies of the dataset and scores both on clean
// targets. variance_ratio 0 skips the second training, so the regimes
// coincide exactly.
NoiseExperiment run_noise_experiment(const Dataset& dataset, const NoiseSpec& spec,
                                     const VaeConfig& vcfg, const TrainConfig& tcfg);

// Per-record reconstruction error, record order.
std::vector<double> reconstruction_errors(const Vae& model, const Dataset& dataset);
std::vector<double> wavelet_errors(const Dataset& dataset, const WaveletSpec& spec,
                                   const EnergyProfile& profile, int n);

// (normal, anomalous) errors split by true label; fails on Unknown labels.
std::pair<std::vector<double>, std::vector<double>> split_errors_by_label(
    const Dataset& dataset, std::span<const double> errors);

// Threshold maximizing balanced accuracy over a candidate grid: just below
// the smallest error, midpoints of adjacent distinct errors, the largest
// error. Ties pick the smaller threshold.
double choose_threshold(std::span<const double> errors_normal,
                        std::span<const double> errors_anomalous);

struct AnomalyOutcome {
    std::vector<Label> predicted;
    std::vector<double> errors;
    ConfusionMatrix confusion;
};

// Flags records whose reconstruction error exceeds the threshold.
AnomalyOutcome detect_anomalies(const Vae& model, const Dataset& dataset, double threshold);
// Same protocol with global-selection wavelet reconstruction error.
AnomalyOutcome wavelet_anomaly_baseline(const Dataset& dataset, const WaveletSpec& spec,
                                        const EnergyProfile& profile, int n, double threshold);

// Reference results on the public 12-lead sets, for report comparison.
struct ReferenceEntry {
    const char* dataset;
    Method method;
    double kept_fraction;
    double mse;
};

std::span<const ReferenceEntry> reference_compression_table();

// Reference detection rates (percent of each true class predicted correctly).
inline constexpr double kReferenceVaeDetectionRate = 69.0;
inline constexpr double kReferenceWaveletDetectionRate = 55.0;

}  // namespace tsc
