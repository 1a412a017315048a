#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "layers.hpp"
#include "record.hpp"
#include "tensor.hpp"

namespace tsc {

constexpr double kLogvarClamp = 10.0;

struct VaeConfig {
    int in_channels = 1;
    int crop_len = 256;
    std::array<int, 3> conv_channels = {16, 32, 64};
    int kernel_size = 7;  // odd
    std::array<int, 3> strides = {2, 2, 2};
    int latent_dim = 16;
    double beta = 1.0;  // KL weight
    Activation activation = Activation::LeakyRelu;

    int pad() const { return (kernel_size - 1) / 2; }
    // Spatial lengths L0..L3 through the encoder.
    std::array<int, 4> layer_lengths() const;
    int flat_dim() const;  // conv_channels[2] * L3
    double kept_fraction() const;  // latent_dim / (in_channels * crop_len)
    void validate() const;
};

struct LayerParams {
    std::vector<double> w;
    std::vector<double> b;
};

// Batched diagonal-Gaussian latent; logvar is stored clamped to [-10, 10].
struct GaussianLatent {
    int batch = 0;
    int dim = 0;
    std::vector<double> mu;
    std::vector<double> logvar;
};

// Encoder: conv x3 -> dense mu / dense logvar. Decoder: dense -> tconv x3,
// final layer linear. Decoder weights keep conv orientation, so dec3 pairs
// with enc3's shape and so on down to dec1.
struct Vae {
    VaeConfig cfg;
    LayerParams enc1, enc2, enc3;
    LayerParams mu_head, logvar_head;
    LayerParams dec_dense;
    LayerParams dec3, dec2, dec1;

    static Vae create(const VaeConfig& cfg);               // zero-filled
    // Weights uniform +-sqrt(6/fan_in); logvar head flat at -4 so the latent
    // starts near-deterministic.
    static Vae init(const VaeConfig& cfg, uint64_t seed);

    // Fixed order; also the checkpoint tensor order.
    std::vector<std::pair<std::string, std::vector<double>*>> params();
    std::vector<std::pair<std::string, const std::vector<double>*>> params() const;
    int64_t parameter_count() const;
};

// Everything the backward pass needs from a forward pass.
struct VaeTrace {
    Tensor x;
    Tensor pre1, act1, pre2, act2, pre3, act3;
    std::vector<double> logvar_pre;  // before clamping
    GaussianLatent latent;
    std::vector<double> eps;
    Tensor z;
    Tensor dec_pre, dec_act;  // decoder dense output, reshaped to (B, c3, L3)
    Tensor t3pre, t3act, t2pre, t2act;
    Tensor xhat;
};

struct ElboParts {
    double total = 0.0;
    double recon = 0.0;
    double kl = 0.0;
};

GaussianLatent encode(const Vae& vae, const Tensor& x);
Tensor decode(const Vae& vae, const std::vector<double>& z, int batch);
// z = mu + exp(logvar/2) * eps, elementwise over batch*dim.
std::vector<double> reparameterize(const GaussianLatent& latent, const std::vector<double>& eps);
// Batch mean of the closed-form KL against the standard normal.
double kl_divergence(const GaussianLatent& latent);
// recon = mean squared error over all elements; total = recon + beta*kl/E
// with E = elements per sample; kl is the batch mean.
ElboParts elbo_loss(const Tensor& x, const Tensor& xhat, const GaussianLatent& latent,
                    double beta);

ElboParts vae_forward(const Vae& vae, const Tensor& x, const std::vector<double>& eps,
                      VaeTrace& trace);
// Accumulates d(total)/d(params) into grads (same shapes as vae).
void vae_backward(const Vae& vae, const VaeTrace& trace, Vae& grads);

Tensor record_as_tensor(const Record& record);

void save_vae(const Vae& vae, const std::filesystem::path& path);
Vae load_vae(const std::filesystem::path& path);

}  // namespace tsc
