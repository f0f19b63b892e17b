// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "absa/features.hpp"
#include "absa/gradcheck.hpp"

namespace absa {

/// cnn, rnn, stacked, joint, sentiment, relation.
std::span<const std::string_view> gradcheck_kinds();

/// Small but structurally complete sizes for finite-difference checks.
HyperParams tiny_hyperparams();

/// Builds a seeded tiny instance of the named model (dropout off), a random
/// review and gold targets for it, and checks every parameter. Throws
/// std::invalid_argument on an unknown kind.
GradCheckReport check_model_gradients(std::string_view kind, std::uint64_t seed,
                                      double analytic_scale = 1.0);

}  // namespace absa
