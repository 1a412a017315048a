#include "layers.hpp"

#include <algorithm>

#include "errors.hpp"

namespace tsc {
namespace {

constexpr double kLeakySlope = 0.01;

void check_geometry(int kernel, int stride, int pad) {
    if (kernel < 1 || stride < 1 || pad < 0) fail_invalid("bad conv geometry");
}

void check_conv_shapes(const Tensor& x, const std::vector<double>& w, int out_ch, int kernel,
                       int stride, int pad) {
    check_geometry(kernel, stride, pad);
    if (w.size() != size_t(out_ch) * x.channels * kernel)
        fail_invalid("conv weight size mismatch");
}

// Weights stay in conv orientation, so the transposed conv's input plays the
// out_ch role and in_ch is the number of channels it produces.
void check_tconv_shapes(const Tensor& x, const std::vector<double>& w, int in_ch, int kernel,
                        int stride, int pad) {
    check_geometry(kernel, stride, pad);
    if (w.size() != size_t(x.channels) * in_ch * kernel)
        fail_invalid("transposed conv weight size mismatch");
}

// y[b,o,i] += sum_{c,j} w[o,c,j] * x[b,c,i*stride+j-pad]
void correlate(const Tensor& x, const std::vector<double>& w, int out_ch, int kernel, int stride,
               int pad, Tensor& y) {
    int in_ch = x.channels;
    for (int b = 0; b < x.batch; ++b) {
        const double* xs = x.sample(b);
        double* ys = y.sample(b);
        for (int o = 0; o < out_ch; ++o) {
            const double* wo = w.data() + size_t(o) * in_ch * kernel;
            double* yrow = ys + size_t(o) * y.length;
            for (int i = 0; i < y.length; ++i) {
                int base = i * stride - pad;
                int jlo = std::max(0, -base);
                int jhi = std::min(kernel, x.length - base);
                double acc = 0.0;
                for (int c = 0; c < in_ch; ++c) {
                    const double* xrow = xs + size_t(c) * x.length + base;
                    const double* wk = wo + size_t(c) * kernel;
                    for (int j = jlo; j < jhi; ++j) acc += wk[j] * xrow[j];
                }
                yrow[i] += acc;
            }
        }
    }
}

// out[b,c,i*stride+j-pad] += sum_o w[o,c,j] * g[b,o,i]
void scatter(const Tensor& g, const std::vector<double>& w, int kernel, int stride, int pad,
             Tensor& out) {
    int out_ch = g.channels;
    int in_ch = out.channels;
    for (int b = 0; b < g.batch; ++b) {
        const double* gs = g.sample(b);
        double* os = out.sample(b);
        for (int o = 0; o < out_ch; ++o) {
            const double* grow = gs + size_t(o) * g.length;
            const double* wo = w.data() + size_t(o) * in_ch * kernel;
            for (int c = 0; c < in_ch; ++c) {
                double* orow = os + size_t(c) * out.length;
                const double* wk = wo + size_t(c) * kernel;
                for (int i = 0; i < g.length; ++i) {
                    double gv = grow[i];
                    int base = i * stride - pad;
                    int jlo = std::max(0, -base);
                    int jhi = std::min(kernel, out.length - base);
                    for (int j = jlo; j < jhi; ++j) orow[base + j] += wk[j] * gv;
                }
            }
        }
    }
}

// dw[o,c,j] += sum_{b,i} g[b,o,i] * x[b,c,i*stride+j-pad]
void weight_grad(const Tensor& x, const Tensor& g, int kernel, int stride, int pad,
                 std::vector<double>& dw) {
    int out_ch = g.channels;
    int in_ch = x.channels;
    for (int b = 0; b < x.batch; ++b) {
        const double* xs = x.sample(b);
        const double* gs = g.sample(b);
        for (int o = 0; o < out_ch; ++o) {
            const double* grow = gs + size_t(o) * g.length;
            double* dwo = dw.data() + size_t(o) * in_ch * kernel;
            for (int c = 0; c < in_ch; ++c) {
                const double* xrow = xs + size_t(c) * x.length;
                double* dwk = dwo + size_t(c) * kernel;
                for (int i = 0; i < g.length; ++i) {
                    double gv = grow[i];
                    int base = i * stride - pad;
                    int jlo = std::max(0, -base);
                    int jhi = std::min(kernel, x.length - base);
                    for (int j = jlo; j < jhi; ++j) dwk[j] += gv * xrow[base + j];
                }
            }
        }
    }
}

void bias_grad(const Tensor& g, std::vector<double>& db) {
    for (int b = 0; b < g.batch; ++b)
        for (int o = 0; o < g.channels; ++o) {
            const double* grow = g.sample(b) + size_t(o) * g.length;
            double acc = 0.0;
            for (int i = 0; i < g.length; ++i) acc += grow[i];
            db[o] += acc;
        }
}

}  // namespace

int conv_out_length(int length, int kernel, int stride, int pad) {
    int num = length + 2 * pad - kernel;
    if (num < 0) fail_invalid("conv kernel larger than padded input");
    return num / stride + 1;
}

Tensor conv1d_forward(const Tensor& x, const std::vector<double>& w,
                      const std::vector<double>& bias, int out_ch, int kernel, int stride,
                      int pad) {
    check_conv_shapes(x, w, out_ch, kernel, stride, pad);
    if (bias.size() != size_t(out_ch)) fail_invalid("conv bias size mismatch");
    Tensor y(x.batch, out_ch, conv_out_length(x.length, kernel, stride, pad));
    for (int b = 0; b < y.batch; ++b)
        for (int o = 0; o < out_ch; ++o) {
            double* yrow = y.sample(b) + size_t(o) * y.length;
            for (int i = 0; i < y.length; ++i) yrow[i] = bias[o];
        }
    correlate(x, w, out_ch, kernel, stride, pad, y);
    return y;
}

void conv1d_backward(const Tensor& x, const std::vector<double>& w, int out_ch, int kernel,
                     int stride, int pad, const Tensor& dy, Tensor* dx, std::vector<double>* dw,
                     std::vector<double>* db) {
    check_conv_shapes(x, w, out_ch, kernel, stride, pad);
    if (dy.batch != x.batch || dy.channels != out_ch ||
        dy.length != conv_out_length(x.length, kernel, stride, pad))
        fail_invalid("conv backward gradient shape mismatch");
    if (dx) {
        if (dx->batch != x.batch || dx->channels != x.channels || dx->length != x.length)
            fail_invalid("conv backward dx shape mismatch");
        scatter(dy, w, kernel, stride, pad, *dx);
    }
    if (dw) {
        if (dw->size() != w.size()) fail_invalid("conv backward dw size mismatch");
        weight_grad(x, dy, kernel, stride, pad, *dw);
    }
    if (db) {
        if (db->size() != size_t(out_ch)) fail_invalid("conv backward db size mismatch");
        bias_grad(dy, *db);
    }
}

Tensor tconv1d_forward(const Tensor& x, const std::vector<double>& w,
                       const std::vector<double>& bias, int in_ch, int kernel, int stride, int pad,
                       int out_len) {
    check_tconv_shapes(x, w, in_ch, kernel, stride, pad);
    if (bias.size() != size_t(in_ch)) fail_invalid("transposed conv bias size mismatch");
    if (conv_out_length(out_len, kernel, stride, pad) != x.length)
        fail_invalid("transposed conv output length does not invert the conv length formula");
    Tensor y(x.batch, in_ch, out_len);
    for (int b = 0; b < y.batch; ++b)
        for (int c = 0; c < in_ch; ++c) {
            double* yrow = y.sample(b) + size_t(c) * y.length;
            for (int i = 0; i < y.length; ++i) yrow[i] = bias[c];
        }
    scatter(x, w, kernel, stride, pad, y);
    return y;
}

void tconv1d_backward(const Tensor& x, const std::vector<double>& w, int in_ch, int kernel,
                      int stride, int pad, const Tensor& dy, Tensor* dx, std::vector<double>* dw,
                      std::vector<double>* db) {
    check_tconv_shapes(x, w, in_ch, kernel, stride, pad);
    if (dy.batch != x.batch || dy.channels != in_ch ||
        conv_out_length(dy.length, kernel, stride, pad) != x.length)
        fail_invalid("transposed conv backward gradient shape mismatch");
    if (dx) {
        if (dx->batch != x.batch || dx->channels != x.channels || dx->length != x.length)
            fail_invalid("transposed conv backward dx shape mismatch");
        correlate(dy, w, x.channels, kernel, stride, pad, *dx);
    }
    if (dw) {
        if (dw->size() != w.size()) fail_invalid("transposed conv backward dw size mismatch");
        weight_grad(dy, x, kernel, stride, pad, *dw);
    }
    if (db) {
        if (db->size() != size_t(in_ch)) fail_invalid("transposed conv backward db size mismatch");
        bias_grad(dy, *db);
    }
}

Tensor dense_forward(const Tensor& x, const std::vector<double>& w,
                     const std::vector<double>& bias, int out_dim) {
    int in_dim = int(x.per_sample());
    if (w.size() != size_t(out_dim) * in_dim) fail_invalid("dense weight size mismatch");
    if (bias.size() != size_t(out_dim)) fail_invalid("dense bias size mismatch");
    Tensor y(x.batch, out_dim, 1);
    for (int b = 0; b < x.batch; ++b) {
        const double* xs = x.sample(b);
        double* ys = y.sample(b);
        for (int o = 0; o < out_dim; ++o) {
            const double* wrow = w.data() + size_t(o) * in_dim;
            double acc = bias[o];
            for (int i = 0; i < in_dim; ++i) acc += wrow[i] * xs[i];
            ys[o] = acc;
        }
    }
    return y;
}

void dense_backward(const Tensor& x, const std::vector<double>& w, int out_dim, const Tensor& dy,
                    Tensor* dx, std::vector<double>* dw, std::vector<double>* db) {
    int in_dim = int(x.per_sample());
    if (w.size() != size_t(out_dim) * in_dim) fail_invalid("dense weight size mismatch");
    if (dy.batch != x.batch || dy.per_sample() != out_dim)
        fail_invalid("dense backward gradient shape mismatch");
    if (dx && (dx->batch != x.batch || dx->per_sample() != in_dim))
        fail_invalid("dense backward dx shape mismatch");
    for (int b = 0; b < x.batch; ++b) {
        const double* xs = x.sample(b);
        const double* gs = dy.sample(b);
        for (int o = 0; o < out_dim; ++o) {
            double gv = gs[o];
            const double* wrow = w.data() + size_t(o) * in_dim;
            if (dx) {
                double* dxs = dx->sample(b);
                for (int i = 0; i < in_dim; ++i) dxs[i] += wrow[i] * gv;
            }
            if (dw) {
                double* dwrow = dw->data() + size_t(o) * in_dim;
                for (int i = 0; i < in_dim; ++i) dwrow[i] += gv * xs[i];
            }
            if (db) (*db)[o] += gv;
        }
    }
}

void activation_forward(Tensor& x, Activation act) {
    if (act == Activation::Identity) return;
    for (double& v : x.values)
        if (v < 0.0) v *= kLeakySlope;
}

void activation_backward(const Tensor& pre, Activation act, Tensor& dy) {
    if (act == Activation::Identity) return;
    if (pre.values.size() != dy.values.size()) fail_invalid("activation gradient shape mismatch");
    for (size_t i = 0; i < dy.values.size(); ++i)
        if (pre.values[i] < 0.0) dy.values[i] *= kLeakySlope;
}

}  // namespace tsc
