// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "absa/rng.hpp"
#include "absa/tensor.hpp"

namespace absa {

/// Trainable tensor with its gradient accumulator and RMSProp cache.
///
/// `grad` and `rms_cache` are allocated on first use, so models loaded only
/// for inference carry just their values. Parameters marked `row_sparse`
/// (embedding tables) record which rows received gradient; zeroing and
/// optimizer steps then touch only those rows.
struct Parameter {
  std::string name;
  Tensor2 value;
  Tensor2 grad;
  Tensor2 rms_cache;
  bool row_sparse = false;

  Parameter() = default;
  Parameter(std::string name, std::size_t rows, std::size_t cols);

  std::size_t rows() const { return value.rows(); }
  std::size_t cols() const { return value.cols(); }
  std::size_t size() const { return value.size(); }

  /// Gradient buffer, allocated (zeroed) if absent.
  Tensor2& grad_buffer();
  Tensor2& cache_buffer();

  void mark_row(std::size_t r);
  const std::vector<std::size_t>& touched_rows() const { return touched_; }
  void zero_grad();

 private:
  std::vector<std::size_t> touched_;
  std::vector<bool> touched_flag_;
};

void init_zeros(Parameter& p);
/// Uniform in +-sqrt(6 / (fan_in + fan_out)).
void init_glorot_uniform(Parameter& p, std::size_t fan_in, std::size_t fan_out, Rng& rng);
void init_uniform(Parameter& p, double limit, Rng& rng);

}  // namespace absa
