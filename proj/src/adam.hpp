#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vae.hpp"

namespace tsc {

struct AdamHyper {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// One bias-corrected Adam update; t is the 1-based step count. `name` labels
// the parameter in error messages when a gradient is non-finite.
void adam_step(std::vector<double>& param, const std::vector<double>& grad,
               std::vector<double>& m, std::vector<double>& v, int64_t t, const AdamHyper& hyper,
               const std::string& name);

// Adam state shaped like a Vae's parameters.
struct VaeAdam {
    AdamHyper hyper;
    Vae m;
    Vae v;
    int64_t t = 0;

    VaeAdam(const VaeConfig& cfg, const AdamHyper& h)
        : hyper(h), m(Vae::create(cfg)), v(Vae::create(cfg)) {}

    void step(Vae& params, const Vae& grads);
};

}  // namespace tsc
