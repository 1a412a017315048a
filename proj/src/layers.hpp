#pragma once

#include <vector>

#include "tensor.hpp"

namespace tsc {

int conv_out_length(int length, int kernel, int stride, int pad);

// y[b,o,i] = bias[o] + sum_{c,j} w[o,c,j] * x[b,c,i*stride+j-pad], zero outside.
// Weights are row-major [out_ch][in_ch][kernel].
Tensor conv1d_forward(const Tensor& x, const std::vector<double>& w,
                      const std::vector<double>& bias, int out_ch, int kernel, int stride,
                      int pad);

// Gradients of conv1d_forward. Any of dx/dw/db may be null; dw/db accumulate.
void conv1d_backward(const Tensor& x, const std::vector<double>& w, int out_ch, int kernel,
                     int stride, int pad, const Tensor& dy, Tensor* dx, std::vector<double>* dw,
                     std::vector<double>* db);

// Exact adjoint of conv1d_forward's linear map plus its own bias; weights keep
// the conv orientation [out_ch][in_ch][kernel] and x has out_ch channels.
// y[b,c,t] = bias[c] + sum over o,i,j with t = i*stride+j-pad of w[o,c,j]*x[b,o,i].
Tensor tconv1d_forward(const Tensor& x, const std::vector<double>& w,
                       const std::vector<double>& bias, int in_ch, int kernel, int stride, int pad,
                       int out_len);

void tconv1d_backward(const Tensor& x, const std::vector<double>& w, int in_ch, int kernel,
                      int stride, int pad, const Tensor& dy, Tensor* dx, std::vector<double>* dw,
                      std::vector<double>* db);

// y[b,o] = bias[o] + sum_i w[o,i] * x[b,i]; tensors are (batch, dim, 1).
Tensor dense_forward(const Tensor& x, const std::vector<double>& w,
                     const std::vector<double>& bias, int out_dim);
void dense_backward(const Tensor& x, const std::vector<double>& w, int out_dim, const Tensor& dy,
                    Tensor* dx, std::vector<double>* dw, std::vector<double>* db);

enum class Activation { LeakyRelu, Identity };

void activation_forward(Tensor& x, Activation act);
// dy *= act'(pre) elementwise, where pre is the pre-activation tensor.
void activation_backward(const Tensor& pre, Activation act, Tensor& dy);

}  // namespace tsc
