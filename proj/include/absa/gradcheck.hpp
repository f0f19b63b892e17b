// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absa/parameter.hpp"

namespace absa {

/// Evaluates the loss for the current parameter values. When the argument is
/// true the closure must also accumulate analytic gradients into the
/// parameters. It has to be deterministic (dropout off or reseeded).
using LossClosure = std::function<double(bool with_gradients)>;

struct GradCheckGroup {
  std::string name;
  double max_rel_error = 0.0;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::vector<GradCheckGroup> groups;  // one per parameter, in input order
};

/// Compares every analytic gradient entry with the central difference
/// (L(t + eps) - L(t - eps)) / 2 eps, using the relative error
/// |a - n| / max(|a|, |n|, 1e-8).
///
/// `analytic_scale` multiplies the analytic gradients before comparison; it
/// exists only to plant a known defect when testing the checker itself.
GradCheckReport gradient_check(const LossClosure& loss, std::span<Parameter* const> params,
                               double epsilon = 1e-5, double analytic_scale = 1.0);

}  // namespace absa
