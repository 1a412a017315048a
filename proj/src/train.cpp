#include "train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "adam.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "preprocess.hpp"
#include "rng.hpp"

namespace tsc {

void TrainConfig::validate() const {
    if (epochs < 1) fail_invalid("epochs must be >= 1");
    if (batch_size < 1) fail_invalid("batch size must be >= 1");
    if (!(learning_rate > 0.0)) fail_invalid("learning rate must be positive");
    if (!(resample_low > 0.0) || resample_low > 1.0 || resample_high < 1.0)
        fail_invalid("resample factor range must satisfy 0 < low <= 1 <= high");
    if (validation_fraction < 0.0 || validation_fraction >= 1.0)
        fail_invalid("validation fraction must lie in [0, 1)");
    if (!(kl_beta >= 0.0)) fail_invalid("kl beta must be >= 0");
}

namespace {

constexpr int kChunk = 8;  // fixed work unit so results do not depend on thread count

struct SampleSpec {
    int record = 0;
    double factor = 1.0;
    int offset = 0;
};

void zero_params(Vae& v) {
    for (auto& [name, vec] : v.params()) std::fill(vec->begin(), vec->end(), 0.0);
}

void prepare_sample(const Dataset& ds, const SampleSpec& spec, int crop_len, Tensor& batch,
                    int slot) {
    const Record& rec = ds.records[spec.record];
    Record res = resample(rec, rec.sampling_rate * spec.factor);
    for (int c = 0; c < rec.channels; ++c) {
        auto src = res.channel(c);
        double* dst = batch.sample(slot) + size_t(c) * crop_len;
        for (int i = 0; i < crop_len; ++i) dst[i] = src[spec.offset + i];
    }
}

Evaluation evaluate_pair(const Vae& vae, const Record& input, const Record& target,
                         double* kl_out) {
    const VaeConfig& cfg = vae.cfg;
    if (input.channels != cfg.in_channels)
        fail_invalid("record channel count does not match the model");
    if (input.length < cfg.crop_len) fail_invalid("record shorter than the model crop length");
    if (target.channels != input.channels || target.length != input.length)
        fail_invalid("evaluation target shape mismatch");

    std::vector<int> offsets = tile_offsets(input.length, cfg.crop_len, 4);
    int tiles = int(offsets.size());
    Tensor x(tiles, cfg.in_channels, cfg.crop_len);
    for (int t = 0; t < tiles; ++t)
        for (int c = 0; c < cfg.in_channels; ++c) {
            auto src = input.channel(c);
            double* dst = x.sample(t) + size_t(c) * cfg.crop_len;
            for (int i = 0; i < cfg.crop_len; ++i) dst[i] = src[offsets[t] + i];
        }

    GaussianLatent latent = encode(vae, x);
    Tensor xhat = decode(vae, latent.mu, tiles);
    if (kl_out) *kl_out = kl_divergence(latent);

    std::vector<double> acc(target.samples.size(), 0.0);
    std::vector<double> weight(target.samples.size(), 0.0);
    double mse_sum = 0.0;
    for (int t = 0; t < tiles; ++t) {
        double err = 0.0;
        for (int c = 0; c < cfg.in_channels; ++c) {
            const double* hat = xhat.sample(t) + size_t(c) * cfg.crop_len;
            auto tgt = target.channel(c);
            for (int i = 0; i < cfg.crop_len; ++i) {
                double d = hat[i] - tgt[offsets[t] + i];
                err += d * d;
                size_t pos = size_t(c) * target.length + offsets[t] + i;
                acc[pos] += hat[i];
                weight[pos] += 1.0;
            }
        }
        mse_sum += err / (double(cfg.in_channels) * cfg.crop_len);
    }

    Evaluation ev;
    ev.mse = mse_sum / tiles;
    ev.reconstruction = input;
    for (size_t i = 0; i < acc.size(); ++i) ev.reconstruction.samples[i] = acc[i] / weight[i];
    return ev;
}

}  // namespace

TrainResult train(const Dataset& dataset, const VaeConfig& vcfg, const TrainConfig& tcfg) {
    dataset.validate();
    tcfg.validate();
    VaeConfig cfg = vcfg;
    cfg.beta = tcfg.kl_beta;
    cfg.validate();
    if (dataset.channels() != cfg.in_channels)
        fail_invalid("dataset channel count does not match model config");
    double rate = dataset.sampling_rate();
    int min_len = resample_length(dataset.length(), rate, rate * tcfg.resample_low);
    if (min_len < cfg.crop_len)
        fail_invalid("records too short for the crop length under the resample range");

    Rng base(tcfg.seed);
    Rng shuffle_rng = base.split(1);
    Rng batch_rng = base.split(2);
    Rng eps_rng = base.split(3);
    uint64_t init_seed = base.split(4).next_u64();

    int count = dataset.count();
    std::vector<int> idx(count);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = count - 1; i > 0; --i)
        std::swap(idx[i], idx[size_t(shuffle_rng.below(i + 1))]);
    int val_count = int(std::llround(count * tcfg.validation_fraction));
    if (tcfg.validation_fraction > 0.0 && val_count == 0) val_count = 1;
    if (val_count >= count) val_count = count - 1;
    std::vector<int> train_idx(idx.begin(), idx.end() - val_count);
    std::vector<int> val_idx(idx.end() - val_count, idx.end());
    int train_count = int(train_idx.size());

    Vae vae = Vae::init(cfg, init_seed);
    VaeAdam opt(cfg, AdamHyper{tcfg.learning_rate, tcfg.adam_beta1, tcfg.adam_beta2,
                               tcfg.adam_eps});

    int batch = tcfg.batch_size;
    int latent = cfg.latent_dim;
    double elems = double(cfg.in_channels) * cfg.crop_len;
    // One epoch covers each record's full span in expectation, not a single
    // random crop of it.
    int crops_per_record =
        std::max(1, int(std::llround(double(dataset.length()) / cfg.crop_len)));
    int steps = std::max(1, (train_count * crops_per_record + batch - 1) / batch);
    int num_chunks = (batch + kChunk - 1) / kChunk;

    Vae grads = Vae::create(cfg);
    std::vector<Vae> chunk_grads;
    chunk_grads.reserve(num_chunks);
    for (int i = 0; i < num_chunks; ++i) chunk_grads.push_back(Vae::create(cfg));
    std::vector<ElboParts> chunk_parts(num_chunks);

    std::vector<SampleSpec> specs(batch);
    std::vector<double> eps(size_t(batch) * latent);
    Tensor x(batch, cfg.in_channels, cfg.crop_len);

    TrainResult result;
    result.model = vae;
    double best_val = std::numeric_limits<double>::infinity();

    // KL weight and reparameterization noise both ramp in over the first
    // third of training. At full strength from epoch one the prior drags
    // logvar to zero before the decoder has made the latent worth keeping,
    // and the unit noise then drowns mu for good; the early epochs instead
    // train a plain autoencoder, which reliably wires the bottleneck.
    int warmup = (tcfg.epochs + 2) / 3;

    for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
        vae.cfg.beta = cfg.beta * std::min(1.0, double(epoch + 1) / warmup);
        double noise_scale = std::min(1.0, double(epoch) / warmup);
        double epoch_loss = 0.0, epoch_recon = 0.0;
        for (int step = 0; step < steps; ++step) {
            for (int s = 0; s < batch; ++s) {
                SampleSpec sp;
                sp.record = train_idx[size_t(batch_rng.below(train_count))];
                sp.factor = batch_rng.uniform(tcfg.resample_low, tcfg.resample_high);
                int rlen = resample_length(dataset.length(), rate, rate * sp.factor);
                sp.offset = int(batch_rng.below(rlen - cfg.crop_len + 1));
                specs[s] = sp;
            }
            for (double& e : eps) e = noise_scale * eps_rng.normal();

            parallel_for(batch, [&](int64_t s) {
                prepare_sample(dataset, specs[size_t(s)], cfg.crop_len, x, int(s));
            });
            parallel_for(num_chunks, [&](int64_t ci) {
                int lo = int(ci) * kChunk;
                int hi = std::min(batch, lo + kChunk);
                int cb = hi - lo;
                Tensor xc(cb, cfg.in_channels, cfg.crop_len);
                std::copy(x.sample(lo), x.sample(lo) + size_t(cb) * x.per_sample(),
                          xc.values.begin());
                std::vector<double> epsc(eps.begin() + size_t(lo) * latent,
                                         eps.begin() + size_t(hi) * latent);
                zero_params(chunk_grads[ci]);
                VaeTrace trace;
                chunk_parts[ci] = vae_forward(vae, xc, epsc, trace);
                vae_backward(vae, trace, chunk_grads[ci]);
            });

            zero_params(grads);
            auto gl = grads.params();
            ElboParts step_parts;
            for (int ci = 0; ci < num_chunks; ++ci) {
                int cb = std::min(batch, (ci + 1) * kChunk) - ci * kChunk;
                double w = double(cb) / batch;
                step_parts.total += w * chunk_parts[ci].total;
                step_parts.recon += w * chunk_parts[ci].recon;
                step_parts.kl += w * chunk_parts[ci].kl;
                auto cl = chunk_grads[ci].params();
                for (size_t pi = 0; pi < gl.size(); ++pi) {
                    std::vector<double>& dst = *gl[pi].second;
                    const std::vector<double>& src = *cl[pi].second;
                    for (size_t j = 0; j < dst.size(); ++j) dst[j] += w * src[j];
                }
            }
            if (!std::isfinite(step_parts.total))
                fail_numeric("non-finite loss at epoch " + std::to_string(epoch + 1) + " step " +
                             std::to_string(step + 1));
            opt.step(vae, grads);
            epoch_loss += step_parts.total;
            epoch_recon += step_parts.recon;
        }
        epoch_loss /= steps;
        epoch_recon /= steps;
        vae.cfg.beta = cfg.beta;

        double val_loss = epoch_loss, val_recon = epoch_recon;
        if (!val_idx.empty()) {
            std::vector<double> losses(val_idx.size()), recons(val_idx.size());
            parallel_for(int64_t(val_idx.size()), [&](int64_t i) {
                double kl = 0.0;
                Evaluation ev =
                    evaluate_pair(vae, dataset.records[val_idx[size_t(i)]],
                                  dataset.records[val_idx[size_t(i)]], &kl);
                recons[size_t(i)] = ev.mse;
                losses[size_t(i)] = ev.mse + cfg.beta * kl / elems;
            });
            val_loss = pairwise_mean(losses);
            val_recon = pairwise_mean(recons);
        }

        result.history.push_back({epoch_loss, epoch_recon, val_loss, val_recon});
        if (val_loss < best_val) {
            best_val = val_loss;
            result.best_epoch = epoch;
            result.model = vae;
        }
    }
    return result;
}

Evaluation evaluate_record(const Vae& vae, const Record& record) {
    return evaluate_pair(vae, record, record, nullptr);
}

Evaluation evaluate_record_against(const Vae& vae, const Record& input, const Record& target) {
    return evaluate_pair(vae, input, target, nullptr);
}

double evaluate_dataset(const Vae& vae, const Dataset& dataset) {
    return evaluate_dataset_against(vae, dataset, dataset);
}

double evaluate_dataset_against(const Vae& vae, const Dataset& inputs, const Dataset& targets) {
    if (inputs.count() != targets.count()) fail_invalid("input and target datasets differ in size");
    std::vector<double> mses(inputs.records.size());
    parallel_for(int64_t(inputs.records.size()), [&](int64_t i) {
        mses[size_t(i)] =
            evaluate_pair(vae, inputs.records[size_t(i)], targets.records[size_t(i)], nullptr).mse;
    });
    return pairwise_mean(mses);
}

namespace {

bool sign_pattern_differs(const Tensor& a, const Tensor& b) {
    for (size_t i = 0; i < a.values.size(); ++i)
        if ((a.values[i] > 0.0) != (b.values[i] > 0.0)) return true;
    return false;
}

// A perturbation that pushes any activation input across zero, or the raw
// logvar across the clamp boundary, straddles a kink; the central difference
// there measures a mixture of slopes, not the derivative.
bool perturbation_crossed_kink(const VaeTrace& a, const VaeTrace& b) {
    if (sign_pattern_differs(a.pre1, b.pre1)) return true;
    if (sign_pattern_differs(a.pre2, b.pre2)) return true;
    if (sign_pattern_differs(a.pre3, b.pre3)) return true;
    if (sign_pattern_differs(a.dec_pre, b.dec_pre)) return true;
    if (sign_pattern_differs(a.t3pre, b.t3pre)) return true;
    if (sign_pattern_differs(a.t2pre, b.t2pre)) return true;
    for (size_t i = 0; i < a.logvar_pre.size(); ++i) {
        if ((a.logvar_pre[i] >= kLogvarClamp) != (b.logvar_pre[i] >= kLogvarClamp)) return true;
        if ((a.logvar_pre[i] <= -kLogvarClamp) != (b.logvar_pre[i] <= -kLogvarClamp)) return true;
    }
    return false;
}

}  // namespace

double gradient_check(const Vae& vae, const Tensor& x, const GradCheckOptions& opts) {
    Vae probe = vae;
    Rng rng(opts.seed);
    std::vector<double> eps(size_t(x.batch) * probe.cfg.latent_dim);
    for (double& e : eps) e = rng.normal();

    Vae analytic = Vae::create(probe.cfg);
    {
        VaeTrace trace;
        vae_forward(probe, x, eps, trace);
        vae_backward(probe, trace, analytic);
    }
    if (opts.corrupt_grads) opts.corrupt_grads(analytic);

    auto plist = probe.params();
    auto glist = analytic.params();
    std::vector<int64_t> starts(plist.size() + 1, 0);
    for (size_t i = 0; i < plist.size(); ++i)
        starts[i + 1] = starts[i] + int64_t(plist[i].second->size());
    int64_t total = starts.back();
    int64_t samples = std::min<int64_t>(opts.sample_count, total);

    double max_rel = 0.0;
    for (int64_t s = 0; s < samples; ++s) {
        int64_t flat = rng.below(total);
        size_t pi = size_t(std::upper_bound(starts.begin(), starts.end(), flat) -
                           starts.begin()) - 1;
        size_t off = size_t(flat - starts[pi]);
        std::vector<double>& vec = *plist[pi].second;
        double saved = vec[off];
        vec[off] = saved + opts.step;
        VaeTrace tp;
        double fplus = vae_forward(probe, x, eps, tp).total;
        vec[off] = saved - opts.step;
        VaeTrace tm;
        double fminus = vae_forward(probe, x, eps, tm).total;
        vec[off] = saved;
        if (perturbation_crossed_kink(tp, tm)) continue;
        double fd = (fplus - fminus) / (2.0 * opts.step);
        double an = (*glist[pi].second)[off];
        double rel = std::abs(an - fd) / std::max(std::abs(an) + std::abs(fd), 1e-3);
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

}  // namespace tsc
