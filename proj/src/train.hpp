#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "record.hpp"
#include "tensor.hpp"
#include "vae.hpp"

namespace tsc {

struct TrainConfig {
    int epochs = 30;
    int batch_size = 32;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    uint64_t seed = 0;
    double resample_low = 0.8;   // augmentation factor range around 1
    double resample_high = 1.2;
    double kl_beta = 1.0;  // overrides VaeConfig::beta for the trained model
    double validation_fraction = 0.1;

    void validate() const;
};

struct EpochStats {
    double train_loss = 0.0;
    double train_recon = 0.0;
    double val_loss = 0.0;
    double val_recon = 0.0;
};

struct TrainResult {
    Vae model;  // parameters at the best validation loss
    std::vector<EpochStats> history;
    int best_epoch = 0;
};

// Crop/resample-augmented ELBO training, deterministic for a fixed seed and
// thread count independent.
TrainResult train(const Dataset& dataset, const VaeConfig& vcfg, const TrainConfig& tcfg);

struct Evaluation {
    double mse = 0.0;
    Record reconstruction;
};

// Four evenly tiled crops, z = mu; mse is the mean of the per-crop MSEs and
// the reconstruction averages overlapping windows.
Evaluation evaluate_record(const Vae& vae, const Record& record);
// Encodes `input` but scores against `target` (clean reference under noise).
Evaluation evaluate_record_against(const Vae& vae, const Record& input, const Record& target);

double evaluate_dataset(const Vae& vae, const Dataset& dataset);
double evaluate_dataset_against(const Vae& vae, const Dataset& inputs, const Dataset& targets);

struct GradCheckOptions {
    int sample_count = 600;
    double step = 1e-4;
    uint64_t seed = 1;
    std::function<void(Vae&)> corrupt_grads;  // test hook: tampers with analytic grads
};

// Max relative error between analytic and central-difference gradients of the
// ELBO total over a random sample of parameter coordinates.
double gradient_check(const Vae& vae, const Tensor& x, const GradCheckOptions& opts = {});

}  // namespace tsc
