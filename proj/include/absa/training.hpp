// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "absa/rmsprop.hpp"

namespace absa {

/// One-sample-at-a-time training schedule shared by all three stages.
struct TrainOptions {
  std::size_t epochs = 15;
  std::uint64_t seed = 1;
  RmsPropConfig optimizer;
  /// Called after every epoch with its mean per-sample loss.
  std::function<void(std::size_t epoch, double mean_loss)> on_epoch;
};

template <typename Model>
struct Trained {
  Model model;
  std::vector<double> epoch_loss;
};

// Streams derived from the master seed.
inline constexpr std::uint64_t kInitStream = 0;
inline constexpr std::uint64_t kShuffleStream = 1;
inline constexpr std::uint64_t kDropoutStream = 2;

}  // namespace absa
