// SPDX-License-Identifier: Apache-2.0
#include "absa/parameter.hpp"

#include <cmath>
#include <utility>

namespace absa {

Parameter::Parameter(std::string name, std::size_t rows, std::size_t cols)
    : name(std::move(name)), value(rows, cols) {}

Tensor2& Parameter::grad_buffer() {
  if (!grad.same_shape(value) || grad.size() != value.size()) grad = Tensor2(rows(), cols());
  return grad;
}

Tensor2& Parameter::cache_buffer() {
  if (!rms_cache.same_shape(value)) rms_cache = Tensor2(rows(), cols());
  return rms_cache;
}

void Parameter::mark_row(std::size_t r) {
  if (!row_sparse) return;
  if (touched_flag_.size() != rows()) touched_flag_.assign(rows(), false);
  if (!touched_flag_[r]) {
    touched_flag_[r] = true;
    touched_.push_back(r);
  }
}

void Parameter::zero_grad() {
  if (!grad.same_shape(value)) return;
  if (row_sparse) {
    for (std::size_t r : touched_) {
      for (double& g : grad.row(r)) g = 0.0;
      touched_flag_[r] = false;
    }
    touched_.clear();
  } else {
    grad.fill(0.0);
  }
}

void init_zeros(Parameter& p) { p.value.fill(0.0); }

void init_glorot_uniform(Parameter& p, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  init_uniform(p, std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)), rng);
}

void init_uniform(Parameter& p, double limit, Rng& rng) {
  for (double& v : p.value.data()) v = rng.uniform(-limit, limit);
}

}  // namespace absa
