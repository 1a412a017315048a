#include "adam.hpp"

#include <cmath>

#include "errors.hpp"

namespace tsc {

void adam_step(std::vector<double>& param, const std::vector<double>& grad,
               std::vector<double>& m, std::vector<double>& v, int64_t t, const AdamHyper& hyper,
               const std::string& name) {
    if (param.size() != grad.size() || param.size() != m.size() || param.size() != v.size())
        fail_invalid("adam buffers for '" + name + "' have mismatched sizes");
    if (t < 1) fail_invalid("adam step count must be >= 1");
    double bc1 = 1.0 - std::pow(hyper.beta1, double(t));
    double bc2 = 1.0 - std::pow(hyper.beta2, double(t));
    for (size_t i = 0; i < param.size(); ++i) {
        double g = grad[i];
        if (!std::isfinite(g))
            fail_numeric("non-finite gradient in '" + name + "' at index " + std::to_string(i));
        m[i] = hyper.beta1 * m[i] + (1.0 - hyper.beta1) * g;
        v[i] = hyper.beta2 * v[i] + (1.0 - hyper.beta2) * g * g;
        double mhat = m[i] / bc1;
        double vhat = v[i] / bc2;
        param[i] -= hyper.learning_rate * mhat / (std::sqrt(vhat) + hyper.eps);
    }
}

void VaeAdam::step(Vae& params, const Vae& grads) {
    ++t;
    auto ps = params.params();
    auto gs = grads.params();
    auto ms = m.params();
    auto vs = v.params();
    for (size_t i = 0; i < ps.size(); ++i)
        adam_step(*ps[i].second, *gs[i].second, *ms[i].second, *vs[i].second, t, hyper,
                  ps[i].first);
}

}  // namespace tsc
