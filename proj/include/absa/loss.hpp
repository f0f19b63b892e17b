// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

#include "absa/tensor.hpp"

namespace absa {

/// Probabilities are clamped to this floor before taking logs.
inline constexpr double kProbabilityFloor = 1e-12;

struct CrossEntropy {
  double loss = 0.0;
  /// Gradient with respect to the pre-softmax logits: (p - onehot) / N.
  Tensor2 logit_grad;
  /// Set when some target probability hit the floor.
  bool clamped = false;
};

/// Mean categorical cross-entropy of softmax rows against per-row targets.
CrossEntropy cross_entropy(const Tensor2& probabilities, std::span<const std::size_t> targets);

struct BinaryCrossEntropy {
  double loss = 0.0;
  /// Gradient with respect to the pre-sigmoid logit: p - t.
  double logit_grad = 0.0;
};

BinaryCrossEntropy binary_cross_entropy(double probability, int target);

}  // namespace absa
