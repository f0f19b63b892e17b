// SPDX-License-Identifier: Apache-2.0
#include "absa/layers.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absa/errors.hpp"
#include "absa/kernels.hpp"

namespace absa {

Tensor2 softmax_rows(const Tensor2& logits) {
  Tensor2 out(logits.rows(), logits.cols());
  for (std::size_t n = 0; n < logits.rows(); ++n) {
    auto in = logits.row(n);
    auto dst = out.row(n);
    const double peak = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (std::size_t k = 0; k < in.size(); ++k) {
      dst[k] = std::exp(in[k] - peak);
      total += dst[k];
    }
    for (double& v : dst) v /= total;
  }
  return out;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ---------------------------------------------------------------- embedding

EmbeddingLayer::EmbeddingLayer(std::string name, std::size_t entries, std::size_t width)
    : table(std::move(name), entries, width) {
  table.row_sparse = true;
}

Tensor2 EmbeddingLayer::forward(std::span<const std::size_t> indices) const {
  Tensor2 out(indices.size(), width());
  for (std::size_t n = 0; n < indices.size(); ++n) {
    if (indices[n] >= entries()) {
      throw ShapeError(table.name + ": index " + std::to_string(indices[n]) + " at position " +
                       std::to_string(n) + " out of range (" + std::to_string(entries()) +
                       " entries)");
    }
    auto src = table.value.row(indices[n]);
    std::copy(src.begin(), src.end(), out.row(n).begin());
  }
  return out;
}

void EmbeddingLayer::backward(std::span<const std::size_t> indices, const Tensor2& dy) {
  if (dy.rows() != indices.size() || dy.cols() != width()) {
    throw ShapeError(table.name + ": gradient shape does not match lookup");
  }
  Tensor2& g = table.grad_buffer();
  for (std::size_t n = 0; n < indices.size(); ++n) {
    auto dst = g.row(indices[n]);
    auto src = dy.row(n);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
    table.mark_row(indices[n]);
  }
}

// ---------------------------------------------------------------- conv1d

Conv1D::Conv1D(std::string name, std::size_t in, std::size_t maps, std::size_t width)
    : kernel(name + ".kernel", maps, in * width), bias(name + ".bias", 1, maps), in_(in),
      width_(width) {
  if (width % 2 == 0) throw ShapeError(name + ": convolution width must be odd");
}

void Conv1D::init(Rng& rng) {
  init_glorot_uniform(kernel, kernel.cols(), kernel.rows(), rng);
  init_zeros(bias);
}

Tensor2 Conv1D::windows(const Tensor2& x) const {
  if (kernel.cols() != x.cols() * width_) {
    throw ShapeError(kernel.name + ": expects " + std::to_string(kernel.cols()) +
                     " = D_in * l_conv, got input width " + std::to_string(x.cols()) +
                     " with l_conv " + std::to_string(width_));
  }
  const std::size_t n_rows = x.rows();
  const std::size_t half = width_ / 2;
  Tensor2 z(n_rows, kernel.cols());
  for (std::size_t n = 0; n < n_rows; ++n) {
    auto dst = z.row(n);
    for (std::size_t k = 0; k < width_; ++k) {
      // source row n + k - half, zero outside the sequence
      if (n + k < half || n + k - half >= n_rows) continue;
      auto src = x.row(n + k - half);
      std::copy(src.begin(), src.end(), dst.begin() + k * in_);
    }
  }
  return z;
}

Tensor2 Conv1D::forward(const Tensor2& x, Trace* trace) const {
  Tensor2 z = windows(x);
  Tensor2 y = kernels::affine(z, kernel.value, bias.value);
  for (double& v : y.data()) v = std::max(v, 0.0);
  if (trace) {
    trace->windows = std::move(z);
    trace->output = y;
  }
  return y;
}

Tensor2 Conv1D::backward(const Trace& trace, const Tensor2& dy) {
  if (!dy.same_shape(trace.output)) throw ShapeError(kernel.name + ": bad upstream gradient");
  Tensor2 da = dy;
  for (std::size_t i = 0; i < da.size(); ++i) {
    if (trace.output.data()[i] <= 0.0) da.data()[i] = 0.0;
  }
  kernels::affine_backward_params(da, trace.windows, kernel.grad_buffer(), bias.grad_buffer());
  Tensor2 dz(da.rows(), kernel.cols());
  kernels::affine_backward_input(da, kernel.value, dz);

  const std::size_t n_rows = dy.rows();
  const std::size_t half = width_ / 2;
  Tensor2 dx(n_rows, in_);
  for (std::size_t n = 0; n < n_rows; ++n) {
    auto src = dz.row(n);
    for (std::size_t k = 0; k < width_; ++k) {
      if (n + k < half || n + k - half >= n_rows) continue;
      auto dst = dx.row(n + k - half);
      for (std::size_t c = 0; c < in_; ++c) dst[c] += src[k * in_ + c];
    }
  }
  return dx;
}

// ---------------------------------------------------------------- gru

Gru::Gru(std::string name, std::size_t in, std::size_t hidden)
    : w_z(name + ".W_z", hidden, in), w_r(name + ".W_r", hidden, in),
      w_h(name + ".W_h", hidden, in), u_z(name + ".U_z", hidden, hidden),
      u_r(name + ".U_r", hidden, hidden), u_h(name + ".U_h", hidden, hidden),
      b_z(name + ".b_z", 1, hidden), b_r(name + ".b_r", 1, hidden),
      b_h(name + ".b_h", 1, hidden) {}

std::vector<Parameter*> Gru::parameters() {
  return {&w_z, &w_r, &w_h, &u_z, &u_r, &u_h, &b_z, &b_r, &b_h};
}

void Gru::init(Rng& rng) {
  const std::size_t h = hidden();
  const std::size_t in = input_width();
  for (Parameter* w : {&w_z, &w_r, &w_h}) init_glorot_uniform(*w, in, h, rng);
  for (Parameter* u : {&u_z, &u_r, &u_h}) init_glorot_uniform(*u, h, h, rng);
  for (Parameter* b : {&b_z, &b_r, &b_h}) init_zeros(*b);
}

Tensor2 Gru::forward(const Tensor2& x, Trace* trace) const {
  const std::size_t steps = x.rows();
  const std::size_t h = hidden();
  const Tensor2 xz = kernels::affine(x, w_z.value, b_z.value);
  const Tensor2 xr = kernels::affine(x, w_r.value, b_r.value);
  const Tensor2 xh = kernels::affine(x, w_h.value, b_h.value);
  const Tensor2 no_bias(1, h);

  Tensor2 out(steps, h);
  Tensor2 z(steps, h), r(steps, h), cand(steps, h), h_prev(steps, h), reset_prev(steps, h);
  Tensor2 state(1, h);
  Tensor2 rh(1, h);
  Tensor2 uz(1, h), ur(1, h), uh(1, h);
  for (std::size_t n = 0; n < steps; ++n) {
    kernels::serial::affine_forward(state, u_z.value, no_bias, uz);
    kernels::serial::affine_forward(state, u_r.value, no_bias, ur);
    for (std::size_t j = 0; j < h; ++j) {
      z(n, j) = sigmoid(xz(n, j) + uz(0, j));
      r(n, j) = sigmoid(xr(n, j) + ur(0, j));
      rh(0, j) = r(n, j) * state(0, j);
    }
    kernels::serial::affine_forward(rh, u_h.value, no_bias, uh);
    for (std::size_t j = 0; j < h; ++j) {
      cand(n, j) = std::tanh(xh(n, j) + uh(0, j));
      h_prev(n, j) = state(0, j);
      reset_prev(n, j) = rh(0, j);
      const double next = (1.0 - z(n, j)) * state(0, j) + z(n, j) * cand(n, j);
      out(n, j) = next;
      state(0, j) = next;
    }
  }
  if (trace) {
    trace->input = x;
    trace->z = std::move(z);
    trace->r = std::move(r);
    trace->candidate = std::move(cand);
    trace->h = out;
    trace->h_prev = std::move(h_prev);
    trace->reset_prev = std::move(reset_prev);
  }
  return out;
}

Tensor2 Gru::backward(const Trace& t, const Tensor2& dh) {
  if (!dh.same_shape(t.h)) throw ShapeError(w_z.name + ": bad upstream gradient");
  const std::size_t steps = dh.rows();
  const std::size_t h = hidden();
  Tensor2 da_z(steps, h), da_r(steps, h), da_h(steps, h);
  Tensor2 carry(1, h);  // gradient flowing into h_{n-1} from later steps
  Tensor2 step_ah(1, h), step_az(1, h), step_ar(1, h);
  Tensor2 d_rh(1, h), d_prev(1, h);

  for (std::size_t n = steps; n-- > 0;) {
    d_prev.fill(0.0);
    d_rh.fill(0.0);
    for (std::size_t j = 0; j < h; ++j) {
      const double g = dh(n, j) + carry(0, j);
      const double z = t.z(n, j);
      const double c = t.candidate(n, j);
      const double prev = t.h_prev(n, j);
      step_ah(0, j) = g * z * (1.0 - c * c);
      const double dz = g * (c - prev);
      step_az(0, j) = dz * z * (1.0 - z);
      d_prev(0, j) = g * (1.0 - z);
    }
    kernels::serial::affine_backward_input(step_ah, u_h.value, d_rh);
    for (std::size_t j = 0; j < h; ++j) {
      const double r = t.r(n, j);
      const double dr = d_rh(0, j) * t.h_prev(n, j);
      step_ar(0, j) = dr * r * (1.0 - r);
      d_prev(0, j) += d_rh(0, j) * r;
    }
    kernels::serial::affine_backward_input(step_az, u_z.value, d_prev);
    kernels::serial::affine_backward_input(step_ar, u_r.value, d_prev);
    for (std::size_t j = 0; j < h; ++j) {
      da_z(n, j) = step_az(0, j);
      da_r(n, j) = step_ar(0, j);
      da_h(n, j) = step_ah(0, j);
    }
    carry = d_prev;
  }

  kernels::affine_backward_params(da_z, t.input, w_z.grad_buffer(), b_z.grad_buffer());
  kernels::affine_backward_params(da_r, t.input, w_r.grad_buffer(), b_r.grad_buffer());
  kernels::affine_backward_params(da_h, t.input, w_h.grad_buffer(), b_h.grad_buffer());
  Tensor2 unused_bias(1, h);
  kernels::affine_backward_params(da_z, t.h_prev, u_z.grad_buffer(), unused_bias);
  kernels::affine_backward_params(da_r, t.h_prev, u_r.grad_buffer(), unused_bias);
  kernels::affine_backward_params(da_h, t.reset_prev, u_h.grad_buffer(), unused_bias);

  Tensor2 dx(steps, input_width());
  kernels::affine_backward_input(da_z, w_z.value, dx);
  kernels::affine_backward_input(da_r, w_r.value, dx);
  kernels::affine_backward_input(da_h, w_h.value, dx);
  return dx;
}

// ---------------------------------------------------------------- dense

Dense::Dense(std::string name, std::size_t in, std::size_t out, Activation act)
    : weight(name + ".weight", out, in), bias(name + ".bias", 1, out), act_(act) {}

void Dense::init(Rng& rng) {
  init_glorot_uniform(weight, weight.cols(), weight.rows(), rng);
  init_zeros(bias);
}

Tensor2 Dense::forward(const Tensor2& x, Trace* trace) const {
  Tensor2 y = kernels::affine(x, weight.value, bias.value);
  switch (act_) {
    case Activation::Identity:
      break;
    case Activation::Relu:
      for (double& v : y.data()) v = std::max(v, 0.0);
      break;
    case Activation::Softmax:
      y = softmax_rows(y);
      break;
  }
  if (trace) {
    trace->input = x;
    trace->output = y;
  }
  return y;
}

Tensor2 Dense::backward(const Trace& t, const Tensor2& dy) {
  if (!dy.same_shape(t.output)) throw ShapeError(weight.name + ": bad upstream gradient");
  Tensor2 da = dy;
  switch (act_) {
    case Activation::Identity:
      break;
    case Activation::Relu:
      for (std::size_t i = 0; i < da.size(); ++i) {
        if (t.output.data()[i] <= 0.0) da.data()[i] = 0.0;
      }
      break;
    case Activation::Softmax:
      for (std::size_t n = 0; n < da.rows(); ++n) {
        auto y = t.output.row(n);
        auto g = da.row(n);
        double dot = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) dot += g[k] * y[k];
        for (std::size_t k = 0; k < y.size(); ++k) g[k] = y[k] * (g[k] - dot);
      }
      break;
  }
  kernels::affine_backward_params(da, t.input, weight.grad_buffer(), bias.grad_buffer());
  Tensor2 dx(da.rows(), input_width());
  kernels::affine_backward_input(da, weight.value, dx);
  return dx;
}

// ---------------------------------------------------------------- maxout

Maxout::Maxout(std::string name, std::size_t in, std::size_t out, std::size_t pieces) {
  if (pieces < 2) throw ShapeError(name + ": maxout needs at least two pieces");
  for (std::size_t k = 0; k < pieces; ++k) {
    weights.emplace_back(name + ".W" + std::to_string(k), out, in);
    biases.emplace_back(name + ".b" + std::to_string(k), 1, out);
  }
}

std::vector<Parameter*> Maxout::parameters() {
  std::vector<Parameter*> out;
  for (std::size_t k = 0; k < pieces(); ++k) {
    out.push_back(&weights[k]);
    out.push_back(&biases[k]);
  }
  return out;
}

void Maxout::init(Rng& rng) {
  for (std::size_t k = 0; k < pieces(); ++k) {
    init_glorot_uniform(weights[k], input_width(), output_width(), rng);
    init_zeros(biases[k]);
  }
}

Tensor2 Maxout::forward(const Tensor2& x, Trace* trace) const {
  Tensor2 best = kernels::affine(x, weights[0].value, biases[0].value);
  std::vector<std::size_t> winner(best.size(), 0);
  for (std::size_t k = 1; k < pieces(); ++k) {
    const Tensor2 a = kernels::affine(x, weights[k].value, biases[k].value);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.data()[i] > best.data()[i]) {
        best.data()[i] = a.data()[i];
        winner[i] = k;
      }
    }
  }
  if (trace) {
    trace->input = x;
    trace->winner = std::move(winner);
  }
  return best;
}

Tensor2 Maxout::backward(const Trace& t, const Tensor2& dy) {
  if (dy.rows() != t.input.rows() || dy.cols() != output_width()) {
    throw ShapeError(weights[0].name + ": bad upstream gradient");
  }
  Tensor2 dx(dy.rows(), input_width());
  for (std::size_t k = 0; k < pieces(); ++k) {
    Tensor2 da(dy.rows(), dy.cols());
    for (std::size_t i = 0; i < da.size(); ++i) {
      if (t.winner[i] == k) da.data()[i] = dy.data()[i];
    }
    kernels::affine_backward_params(da, t.input, weights[k].grad_buffer(),
                                    biases[k].grad_buffer());
    kernels::affine_backward_input(da, weights[k].value, dx);
  }
  return dx;
}

// ---------------------------------------------------------------- dropout

Dropout::Dropout(double p) : p_(p) {
  if (!(p >= 0.0 && p < 1.0)) throw ShapeError("dropout rate must lie in [0, 1)");
}

Tensor2 Dropout::forward(const Tensor2& x, Mode mode, Rng* rng, Tensor2* mask) const {
  if (mode == Mode::Infer || p_ == 0.0) {
    if (mask) *mask = Tensor2(x.rows(), x.cols(), 1.0);
    return x;
  }
  if (!rng) throw ShapeError("dropout in training mode needs a generator");
  const double keep_scale = 1.0 / (1.0 - p_);
  Tensor2 m(x.rows(), x.cols());
  Tensor2 y(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    m.data()[i] = rng->uniform() < p_ ? 0.0 : keep_scale;
    y.data()[i] = x.data()[i] * m.data()[i];
  }
  if (mask) *mask = std::move(m);
  return y;
}

Tensor2 Dropout::backward(const Tensor2& mask, const Tensor2& dy) {
  if (!mask.same_shape(dy)) throw ShapeError("dropout: mask/gradient shape mismatch");
  Tensor2 dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) dx.data()[i] *= mask.data()[i];
  return dx;
}

}  // namespace absa
