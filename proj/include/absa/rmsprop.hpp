// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "absa/parameter.hpp"

namespace absa {

struct RmsPropConfig {
  double learning_rate = 0.001;
  double decay_rho = 0.9;
  double epsilon = 1e-6;

  /// Throws std::invalid_argument unless lr > 0, 0 < rho < 1, eps > 0.
  void validate() const;
};

/// cache <- rho * cache + (1 - rho) * g^2
/// value <- value - lr * g / (sqrt(cache) + eps)
/// then zeroes the gradient. Row-sparse parameters update touched rows only.
/// Throws NumericError naming the parameter on a non-finite gradient.
void rmsprop_step(Parameter& param, const RmsPropConfig& config);

void rmsprop_step(std::span<Parameter* const> params, const RmsPropConfig& config);

}  // namespace absa
