#include "vae.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "binio.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "rng.hpp"

namespace tsc {

namespace {

Tensor reshape(const Tensor& t, int channels, int length) {
    if (t.per_sample() != int64_t(channels) * length) fail_invalid("reshape size mismatch");
    Tensor out = t;
    out.channels = channels;
    out.length = length;
    return out;
}

void fill_uniform(std::vector<double>& w, double bound, Rng& rng) {
    for (double& v : w) v = rng.uniform(-bound, bound);
}

}  // namespace

std::array<int, 4> VaeConfig::layer_lengths() const {
    std::array<int, 4> lens;
    lens[0] = crop_len;
    for (int i = 0; i < 3; ++i)
        lens[i + 1] = conv_out_length(lens[i], kernel_size, strides[i], pad());
    return lens;
}

int VaeConfig::flat_dim() const { return conv_channels[2] * layer_lengths()[3]; }

double VaeConfig::kept_fraction() const {
    return double(latent_dim) / (double(in_channels) * crop_len);
}

void VaeConfig::validate() const {
    if (in_channels < 1) fail_invalid("vae in_channels must be >= 1");
    if (crop_len < 2) fail_invalid("vae crop_len must be >= 2");
    if (kernel_size < 1 || kernel_size % 2 == 0) fail_invalid("vae kernel_size must be odd");
    if (latent_dim < 1) fail_invalid("vae latent_dim must be >= 1");
    if (!(beta >= 0.0)) fail_invalid("vae beta must be >= 0");
    for (int c : conv_channels)
        if (c < 1) fail_invalid("vae conv channel counts must be >= 1");
    for (int s : strides)
        if (s < 1) fail_invalid("vae strides must be >= 1");
    auto lens = layer_lengths();
    for (int l : lens)
        if (l < 1) fail_invalid("vae crop too short for the conv stack");
}

Vae Vae::create(const VaeConfig& cfg) {
    cfg.validate();
    Vae v;
    v.cfg = cfg;
    int k = cfg.kernel_size;
    auto c = cfg.conv_channels;
    v.enc1.w.assign(size_t(c[0]) * cfg.in_channels * k, 0.0);
    v.enc1.b.assign(c[0], 0.0);
    v.enc2.w.assign(size_t(c[1]) * c[0] * k, 0.0);
    v.enc2.b.assign(c[1], 0.0);
    v.enc3.w.assign(size_t(c[2]) * c[1] * k, 0.0);
    v.enc3.b.assign(c[2], 0.0);
    int flat = cfg.flat_dim();
    v.mu_head.w.assign(size_t(cfg.latent_dim) * flat, 0.0);
    v.mu_head.b.assign(cfg.latent_dim, 0.0);
    v.logvar_head.w.assign(size_t(cfg.latent_dim) * flat, 0.0);
    v.logvar_head.b.assign(cfg.latent_dim, 0.0);
    v.dec_dense.w.assign(size_t(flat) * cfg.latent_dim, 0.0);
    v.dec_dense.b.assign(flat, 0.0);
    v.dec3.w.assign(size_t(c[2]) * c[1] * k, 0.0);
    v.dec3.b.assign(c[1], 0.0);
    v.dec2.w.assign(size_t(c[1]) * c[0] * k, 0.0);
    v.dec2.b.assign(c[0], 0.0);
    v.dec1.w.assign(size_t(c[0]) * cfg.in_channels * k, 0.0);
    v.dec1.b.assign(cfg.in_channels, 0.0);
    return v;
}

Vae Vae::init(const VaeConfig& cfg, uint64_t seed) {
    Vae v = create(cfg);
    Rng rng(seed);
    int k = cfg.kernel_size;
    auto c = cfg.conv_channels;
    fill_uniform(v.enc1.w, std::sqrt(6.0 / (cfg.in_channels * k)), rng);
    fill_uniform(v.enc2.w, std::sqrt(6.0 / (double(c[0]) * k)), rng);
    fill_uniform(v.enc3.w, std::sqrt(6.0 / (double(c[1]) * k)), rng);
    fill_uniform(v.mu_head.w, std::sqrt(6.0 / cfg.flat_dim()), rng);
    // The logvar head starts flat at -4: unit-scale logvar spread at init puts
    // enough noise on z to drown mu, and the decoder then learns to ignore the
    // latent entirely.
    std::fill(v.logvar_head.b.begin(), v.logvar_head.b.end(), -4.0);
    fill_uniform(v.dec_dense.w, std::sqrt(6.0 / cfg.latent_dim), rng);
    fill_uniform(v.dec3.w, std::sqrt(6.0 / (double(c[2]) * k)), rng);
    fill_uniform(v.dec2.w, std::sqrt(6.0 / (double(c[1]) * k)), rng);
    fill_uniform(v.dec1.w, std::sqrt(6.0 / (double(c[0]) * k)), rng);
    return v;
}

std::vector<std::pair<std::string, std::vector<double>*>> Vae::params() {
    return {
        {"enc1.w", &enc1.w},       {"enc1.b", &enc1.b},
        {"enc2.w", &enc2.w},       {"enc2.b", &enc2.b},
        {"enc3.w", &enc3.w},       {"enc3.b", &enc3.b},
        {"mu.w", &mu_head.w},      {"mu.b", &mu_head.b},
        {"logvar.w", &logvar_head.w}, {"logvar.b", &logvar_head.b},
        {"dec_dense.w", &dec_dense.w}, {"dec_dense.b", &dec_dense.b},
        {"dec3.w", &dec3.w},       {"dec3.b", &dec3.b},
        {"dec2.w", &dec2.w},       {"dec2.b", &dec2.b},
        {"dec1.w", &dec1.w},       {"dec1.b", &dec1.b},
    };
}

std::vector<std::pair<std::string, const std::vector<double>*>> Vae::params() const {
    auto mutable_list = const_cast<Vae*>(this)->params();
    std::vector<std::pair<std::string, const std::vector<double>*>> out;
    out.reserve(mutable_list.size());
    for (auto& [name, vec] : mutable_list) out.emplace_back(name, vec);
    return out;
}

int64_t Vae::parameter_count() const {
    int64_t total = 0;
    for (auto& [name, vec] : params()) total += int64_t(vec->size());
    return total;
}

namespace {

GaussianLatent encode_trace(const Vae& vae, const Tensor& x, VaeTrace* tr) {
    const VaeConfig& cfg = vae.cfg;
    if (x.channels != cfg.in_channels || x.length != cfg.crop_len)
        fail_invalid("encoder input shape does not match config");
    int k = cfg.kernel_size, p = cfg.pad();
    auto c = cfg.conv_channels;

    Tensor pre1 = conv1d_forward(x, vae.enc1.w, vae.enc1.b, c[0], k, cfg.strides[0], p);
    Tensor act1 = pre1;
    activation_forward(act1, cfg.activation);
    Tensor pre2 = conv1d_forward(act1, vae.enc2.w, vae.enc2.b, c[1], k, cfg.strides[1], p);
    Tensor act2 = pre2;
    activation_forward(act2, cfg.activation);
    Tensor pre3 = conv1d_forward(act2, vae.enc3.w, vae.enc3.b, c[2], k, cfg.strides[2], p);
    Tensor act3 = pre3;
    activation_forward(act3, cfg.activation);

    Tensor flat = reshape(act3, cfg.flat_dim(), 1);
    Tensor mu = dense_forward(flat, vae.mu_head.w, vae.mu_head.b, cfg.latent_dim);
    Tensor logvar = dense_forward(flat, vae.logvar_head.w, vae.logvar_head.b, cfg.latent_dim);

    GaussianLatent latent;
    latent.batch = x.batch;
    latent.dim = cfg.latent_dim;
    latent.mu = mu.values;
    latent.logvar = logvar.values;
    if (tr) tr->logvar_pre = logvar.values;
    for (double& lv : latent.logvar) lv = std::clamp(lv, -kLogvarClamp, kLogvarClamp);

    if (tr) {
        tr->x = x;
        tr->pre1 = std::move(pre1);
        tr->act1 = std::move(act1);
        tr->pre2 = std::move(pre2);
        tr->act2 = std::move(act2);
        tr->pre3 = std::move(pre3);
        tr->act3 = std::move(act3);
        tr->latent = latent;
    }
    return latent;
}

Tensor decode_trace(const Vae& vae, const std::vector<double>& z, int batch, VaeTrace* tr) {
    const VaeConfig& cfg = vae.cfg;
    if (z.size() != size_t(batch) * cfg.latent_dim)
        fail_invalid("decoder input size does not match batch * latent_dim");
    int k = cfg.kernel_size, p = cfg.pad();
    auto c = cfg.conv_channels;
    auto lens = cfg.layer_lengths();

    Tensor zt(batch, cfg.latent_dim, 1);
    zt.values = z;
    Tensor dpre_flat = dense_forward(zt, vae.dec_dense.w, vae.dec_dense.b, cfg.flat_dim());
    Tensor dec_pre = reshape(dpre_flat, c[2], lens[3]);
    Tensor dec_act = dec_pre;
    activation_forward(dec_act, cfg.activation);

    Tensor t3pre = tconv1d_forward(dec_act, vae.dec3.w, vae.dec3.b, c[1], k, cfg.strides[2], p,
                                   lens[2]);
    Tensor t3act = t3pre;
    activation_forward(t3act, cfg.activation);
    Tensor t2pre = tconv1d_forward(t3act, vae.dec2.w, vae.dec2.b, c[0], k, cfg.strides[1], p,
                                   lens[1]);
    Tensor t2act = t2pre;
    activation_forward(t2act, cfg.activation);
    Tensor xhat = tconv1d_forward(t2act, vae.dec1.w, vae.dec1.b, cfg.in_channels, k,
                                  cfg.strides[0], p, lens[0]);

    if (tr) {
        tr->z = std::move(zt);
        tr->dec_pre = std::move(dec_pre);
        tr->dec_act = std::move(dec_act);
        tr->t3pre = std::move(t3pre);
        tr->t3act = std::move(t3act);
        tr->t2pre = std::move(t2pre);
        tr->t2act = std::move(t2act);
        tr->xhat = xhat;
    }
    return xhat;
}

}  // namespace

GaussianLatent encode(const Vae& vae, const Tensor& x) { return encode_trace(vae, x, nullptr); }

Tensor decode(const Vae& vae, const std::vector<double>& z, int batch) {
    return decode_trace(vae, z, batch, nullptr);
}

std::vector<double> reparameterize(const GaussianLatent& latent, const std::vector<double>& eps) {
    if (eps.size() != latent.mu.size())
        fail_invalid("reparameterization noise size does not match latent");
    std::vector<double> z(latent.mu.size());
    for (size_t i = 0; i < z.size(); ++i)
        z[i] = latent.mu[i] + std::exp(0.5 * latent.logvar[i]) * eps[i];
    return z;
}

double kl_divergence(const GaussianLatent& latent) {
    if (latent.batch < 1) fail_invalid("empty latent");
    double total = 0.0;
    for (size_t i = 0; i < latent.mu.size(); ++i) {
        double mu = latent.mu[i];
        double lv = latent.logvar[i];
        total += mu * mu + std::exp(lv) - 1.0 - lv;
    }
    return 0.5 * total / latent.batch;
}

ElboParts elbo_loss(const Tensor& x, const Tensor& xhat, const GaussianLatent& latent,
                    double beta) {
    if (x.values.size() != xhat.values.size() || x.batch != xhat.batch)
        fail_invalid("elbo shapes do not match");
    ElboParts parts;
    double err = 0.0;
    for (size_t i = 0; i < x.values.size(); ++i) {
        double d = x.values[i] - xhat.values[i];
        err += d * d;
    }
    parts.recon = err / double(x.values.size());
    parts.kl = kl_divergence(latent);
    parts.total = parts.recon + beta * parts.kl / double(x.per_sample());
    return parts;
}

ElboParts vae_forward(const Vae& vae, const Tensor& x, const std::vector<double>& eps,
                      VaeTrace& trace) {
    GaussianLatent latent = encode_trace(vae, x, &trace);
    trace.eps = eps;
    std::vector<double> z = reparameterize(latent, eps);
    decode_trace(vae, z, x.batch, &trace);
    return elbo_loss(trace.x, trace.xhat, latent, vae.cfg.beta);
}

void vae_backward(const Vae& vae, const VaeTrace& trace, Vae& grads) {
    const VaeConfig& cfg = vae.cfg;
    int k = cfg.kernel_size, p = cfg.pad();
    auto c = cfg.conv_channels;
    auto lens = cfg.layer_lengths();
    int batch = trace.x.batch;
    double elems = double(trace.x.per_sample());
    double inv_be = 1.0 / (batch * elems);

    // d(total)/d(xhat)
    Tensor dxhat(batch, cfg.in_channels, lens[0]);
    for (size_t i = 0; i < dxhat.values.size(); ++i)
        dxhat.values[i] = 2.0 * (trace.xhat.values[i] - trace.x.values[i]) * inv_be;

    // Decoder stack.
    Tensor dt2act(batch, c[0], lens[1]);
    tconv1d_backward(trace.t2act, vae.dec1.w, cfg.in_channels, k, cfg.strides[0], p, dxhat,
                     &dt2act, &grads.dec1.w, &grads.dec1.b);
    activation_backward(trace.t2pre, cfg.activation, dt2act);

    Tensor dt3act(batch, c[1], lens[2]);
    tconv1d_backward(trace.t3act, vae.dec2.w, c[0], k, cfg.strides[1], p, dt2act, &dt3act,
                     &grads.dec2.w, &grads.dec2.b);
    activation_backward(trace.t3pre, cfg.activation, dt3act);

    Tensor ddec_act(batch, c[2], lens[3]);
    tconv1d_backward(trace.dec_act, vae.dec3.w, c[1], k, cfg.strides[2], p, dt3act, &ddec_act,
                     &grads.dec3.w, &grads.dec3.b);
    activation_backward(trace.dec_pre, cfg.activation, ddec_act);

    Tensor ddec_flat = reshape(ddec_act, cfg.flat_dim(), 1);
    Tensor dz(batch, cfg.latent_dim, 1);
    dense_backward(trace.z, vae.dec_dense.w, cfg.flat_dim(), ddec_flat, &dz, &grads.dec_dense.w,
                   &grads.dec_dense.b);

    // Latent heads: reparameterization plus the KL term.
    const GaussianLatent& lat = trace.latent;
    double kl_scale = cfg.beta * inv_be;
    Tensor dmu(batch, cfg.latent_dim, 1);
    Tensor dlogvar(batch, cfg.latent_dim, 1);
    for (size_t i = 0; i < lat.mu.size(); ++i) {
        double sigma = std::exp(0.5 * lat.logvar[i]);
        dmu.values[i] = dz.values[i] + kl_scale * lat.mu[i];
        double g = dz.values[i] * 0.5 * sigma * trace.eps[i] +
                   kl_scale * 0.5 * (std::exp(lat.logvar[i]) - 1.0);
        bool clamped = trace.logvar_pre[i] <= -kLogvarClamp || trace.logvar_pre[i] >= kLogvarClamp;
        dlogvar.values[i] = clamped ? 0.0 : g;
    }

    Tensor flat = reshape(trace.act3, cfg.flat_dim(), 1);
    Tensor dflat(batch, cfg.flat_dim(), 1);
    dense_backward(flat, vae.mu_head.w, cfg.latent_dim, dmu, &dflat, &grads.mu_head.w,
                   &grads.mu_head.b);
    dense_backward(flat, vae.logvar_head.w, cfg.latent_dim, dlogvar, &dflat, &grads.logvar_head.w,
                   &grads.logvar_head.b);

    Tensor dact3 = reshape(dflat, c[2], lens[3]);
    activation_backward(trace.pre3, cfg.activation, dact3);
    Tensor dact2(batch, c[1], lens[2]);
    conv1d_backward(trace.act2, vae.enc3.w, c[2], k, cfg.strides[2], p, dact3, &dact2,
                    &grads.enc3.w, &grads.enc3.b);
    activation_backward(trace.pre2, cfg.activation, dact2);
    Tensor dact1(batch, c[0], lens[1]);
    conv1d_backward(trace.act1, vae.enc2.w, c[1], k, cfg.strides[1], p, dact2, &dact1,
                    &grads.enc2.w, &grads.enc2.b);
    activation_backward(trace.pre1, cfg.activation, dact1);
    conv1d_backward(trace.x, vae.enc1.w, c[0], k, cfg.strides[0], p, dact1, nullptr,
                    &grads.enc1.w, &grads.enc1.b);
}

Tensor record_as_tensor(const Record& record) {
    Tensor t(1, record.channels, record.length);
    t.values = record.samples;
    return t;
}

namespace {

constexpr char kVaeMagic[4] = {'V', 'A', 'E', '1'};

}  // namespace

void save_vae(const Vae& vae, const std::filesystem::path& path) {
    std::string out;
    out.append(kVaeMagic, 4);
    const VaeConfig& cfg = vae.cfg;
    put_u32_le(out, uint32_t(cfg.in_channels));
    put_u32_le(out, uint32_t(cfg.crop_len));
    for (int c : cfg.conv_channels) put_u32_le(out, uint32_t(c));
    put_u32_le(out, uint32_t(cfg.kernel_size));
    for (int s : cfg.strides) put_u32_le(out, uint32_t(s));
    put_u32_le(out, uint32_t(cfg.latent_dim));
    put_u32_le(out, cfg.activation == Activation::LeakyRelu ? 0u : 1u);
    put_f64_le(out, cfg.beta);
    for (auto& [name, vec] : vae.params())
        for (double v : *vec) put_f64_le(out, v);
    write_file_atomic(path, out);
}

Vae load_vae(const std::filesystem::path& path) {
    std::string text = read_file(path);
    const unsigned char* base = reinterpret_cast<const unsigned char*>(text.data());
    size_t header = 4 + 11 * 4 + 8;
    if (text.size() < header || std::memcmp(text.data(), kVaeMagic, 4) != 0)
        fail_format(path.string() + ": not a VAE1 checkpoint");
    const unsigned char* p = base + 4;
    auto next_u32 = [&]() {
        uint32_t v = get_u32_le(p);
        p += 4;
        return v;
    };
    VaeConfig cfg;
    cfg.in_channels = int(next_u32());
    cfg.crop_len = int(next_u32());
    for (int i = 0; i < 3; ++i) cfg.conv_channels[i] = int(next_u32());
    cfg.kernel_size = int(next_u32());
    for (int i = 0; i < 3; ++i) cfg.strides[i] = int(next_u32());
    cfg.latent_dim = int(next_u32());
    uint32_t act = next_u32();
    if (act > 1) fail_format(path.string() + ": bad activation code");
    cfg.activation = act == 0 ? Activation::LeakyRelu : Activation::Identity;
    cfg.beta = get_f64_le(p);
    p += 8;

    Vae vae = Vae::create(cfg);
    size_t expected = header + size_t(vae.parameter_count()) * 8;
    if (text.size() != expected)
        fail_format(path.string() + ": checkpoint payload does not match config");
    for (auto& [name, vec] : vae.params())
        for (double& v : *vec) {
            v = get_f64_le(p);
            p += 8;
        }
    return vae;
}

}  // namespace tsc
