// SPDX-License-Identifier: Apache-2.0
#include "absa/rmsprop.hpp"

#include <cmath>
#include <stdexcept>

#include "absa/errors.hpp"

namespace absa {

void RmsPropConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("RMSProp learning rate must be > 0");
  if (!(decay_rho > 0.0 && decay_rho < 1.0)) {
    throw std::invalid_argument("RMSProp decay must lie in (0, 1)");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("RMSProp epsilon must be > 0");
}

namespace {

void update_range(double* value, const double* grad, double* cache, std::size_t count,
                  const RmsPropConfig& c) {
  for (std::size_t i = 0; i < count; ++i) {
    const double g = grad[i];
    cache[i] = c.decay_rho * cache[i] + (1.0 - c.decay_rho) * g * g;
    value[i] -= c.learning_rate * g / (std::sqrt(cache[i]) + c.epsilon);
  }
}

bool finite_range(const double* grad, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::isfinite(grad[i])) return false;
  }
  return true;
}

}  // namespace

void rmsprop_step(Parameter& p, const RmsPropConfig& config) {
  Tensor2& grad = p.grad_buffer();
  Tensor2& cache = p.cache_buffer();
  const std::size_t width = p.cols();
  if (p.row_sparse) {
    for (std::size_t r : p.touched_rows()) {
      if (!finite_range(grad.row(r).data(), width)) {
        throw NumericError("non-finite gradient in parameter '" + p.name + "'");
      }
    }
    for (std::size_t r : p.touched_rows()) {
      update_range(p.value.row(r).data(), grad.row(r).data(), cache.row(r).data(), width,
                   config);
    }
  } else {
    if (!grad.all_finite()) throw NumericError("non-finite gradient in parameter '" + p.name + "'");
    update_range(p.value.data().data(), grad.data().data(), cache.data().data(), p.size(),
                 config);
  }
  p.zero_grad();
}

void rmsprop_step(std::span<Parameter* const> params, const RmsPropConfig& config) {
  for (Parameter* p : params) rmsprop_step(*p, config);
}

}  // namespace absa
