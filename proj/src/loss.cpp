// SPDX-License-Identifier: Apache-2.0
#include "absa/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "absa/errors.hpp"

namespace absa {

CrossEntropy cross_entropy(const Tensor2& probabilities, std::span<const std::size_t> targets) {
  if (targets.size() != probabilities.rows()) {
    throw ShapeError("cross_entropy: " + std::to_string(targets.size()) + " targets for " +
                     std::to_string(probabilities.rows()) + " rows");
  }
  CrossEntropy out;
  out.logit_grad = probabilities;
  const std::size_t n = probabilities.rows();
  if (n == 0) return out;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (targets[i] >= probabilities.cols()) throw ShapeError("cross_entropy: target out of range");
    double p = probabilities(i, targets[i]);
    if (p < kProbabilityFloor) {
      p = kProbabilityFloor;
      out.clamped = true;
    }
    out.loss -= std::log(p);
    out.logit_grad(i, targets[i]) -= 1.0;
  }
  out.loss *= inv_n;
  for (double& g : out.logit_grad.data()) g *= inv_n;
  return out;
}

BinaryCrossEntropy binary_cross_entropy(double probability, int target) {
  const double p = std::clamp(probability, kProbabilityFloor, 1.0 - kProbabilityFloor);
  const double t = target ? 1.0 : 0.0;
  return {-(t * std::log(p) + (1.0 - t) * std::log(1.0 - p)), probability - t};
}

}  // namespace absa
