// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "absa/parameter.hpp"
#include "absa/rng.hpp"
#include "absa/tensor.hpp"

// Layer forward passes are const and return their output; when a trace
// pointer is supplied they also record what the matching backward pass
// needs. Backward passes accumulate into parameter gradients and return the
// gradient with respect to the layer input.

namespace absa {

enum class Mode { Train, Infer };

enum class Activation { Identity, Relu, Softmax };

Tensor2 softmax_rows(const Tensor2& logits);
double sigmoid(double x);

class EmbeddingLayer {
 public:
  EmbeddingLayer() = default;
  EmbeddingLayer(std::string name, std::size_t entries, std::size_t width);

  Tensor2 forward(std::span<const std::size_t> indices) const;
  /// Scatters dy rows into the table gradient, accumulating on repeats.
  void backward(std::span<const std::size_t> indices, const Tensor2& dy);

  std::size_t entries() const { return table.rows(); }
  std::size_t width() const { return table.cols(); }

  Parameter table;
};

/// Same-length 1-D convolution over a zero-padded window of `width` rows
/// centered on each position, followed by a rectified linear activation.
class Conv1D {
 public:
  struct Trace {
    Tensor2 windows;  // N x (in * width)
    Tensor2 output;
  };

  Conv1D() = default;
  Conv1D(std::string name, std::size_t in, std::size_t maps, std::size_t width);

  Tensor2 forward(const Tensor2& x, Trace* trace = nullptr) const;
  Tensor2 backward(const Trace& trace, const Tensor2& dy);
  void init(Rng& rng);

  std::size_t input_width() const { return in_; }
  std::size_t maps() const { return kernel.rows(); }
  std::size_t window() const { return width_; }

  Parameter kernel;  // maps x (in * width)
  Parameter bias;    // 1 x maps

 private:
  Tensor2 windows(const Tensor2& x) const;

  std::size_t in_ = 0;
  std::size_t width_ = 0;
};

/// Gated recurrent unit with the reset gate applied to the previous state
/// before the recurrent product:
///   z = sigm(Wz x + Uz h' + bz), r = sigm(Wr x + Ur h' + br)
///   c = tanh(Wh x + Uh (r * h') + bh), h = (1 - z) * h' + z * c
/// starting from h' = 0.
class Gru {
 public:
  struct Trace {
    Tensor2 input;
    Tensor2 z, r, candidate, h;
    Tensor2 h_prev;      // row n holds the state entering step n
    Tensor2 reset_prev;  // r * h_prev
  };

  Gru() = default;
  Gru(std::string name, std::size_t in, std::size_t hidden);

  /// Row n of the result is the hidden state after step n.
  Tensor2 forward(const Tensor2& x, Trace* trace = nullptr) const;
  /// dh holds the loss gradient for every emitted state.
  Tensor2 backward(const Trace& trace, const Tensor2& dh);
  void init(Rng& rng);

  std::size_t input_width() const { return w_z.cols(); }
  std::size_t hidden() const { return w_z.rows(); }
  std::vector<Parameter*> parameters();

  Parameter w_z, w_r, w_h;  // hidden x in
  Parameter u_z, u_r, u_h;  // hidden x hidden
  Parameter b_z, b_r, b_h;  // 1 x hidden
};

class Dense {
 public:
  struct Trace {
    Tensor2 input;
    Tensor2 output;
  };

  Dense() = default;
  Dense(std::string name, std::size_t in, std::size_t out, Activation act);

  Tensor2 forward(const Tensor2& x, Trace* trace = nullptr) const;
  Tensor2 backward(const Trace& trace, const Tensor2& dy);
  void init(Rng& rng);

  Activation activation() const { return act_; }
  std::size_t input_width() const { return weight.cols(); }
  std::size_t output_width() const { return weight.rows(); }

  Parameter weight;  // out x in
  Parameter bias;    // 1 x out

 private:
  Activation act_ = Activation::Identity;
};

/// Element-wise max over `pieces` affine maps of the same input. Ties route
/// the gradient to the lowest piece index.
class Maxout {
 public:
  struct Trace {
    Tensor2 input;
    std::vector<std::size_t> winner;  // per output element
  };

  Maxout() = default;
  Maxout(std::string name, std::size_t in, std::size_t out, std::size_t pieces);

  Tensor2 forward(const Tensor2& x, Trace* trace = nullptr) const;
  Tensor2 backward(const Trace& trace, const Tensor2& dy);
  void init(Rng& rng);

  std::size_t input_width() const { return weights.front().cols(); }
  std::size_t output_width() const { return weights.front().rows(); }
  std::size_t pieces() const { return weights.size(); }
  std::vector<Parameter*> parameters();

  std::vector<Parameter> weights;  // one out x in matrix per piece
  std::vector<Parameter> biases;
};

/// Inverted dropout: in training each element is zeroed with probability p
/// and survivors are scaled by 1 / (1 - p); inference is the identity.
class Dropout {
 public:
  explicit Dropout(double p = 0.5);

  /// `mask` (if given) receives the per-element multiplier.
  Tensor2 forward(const Tensor2& x, Mode mode, Rng* rng, Tensor2* mask = nullptr) const;
  static Tensor2 backward(const Tensor2& mask, const Tensor2& dy);

  double rate() const { return p_; }

 private:
  double p_;
};

}  // namespace absa
