// SPDX-License-Identifier: Apache-2.0
#include "absa/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace absa {

GradCheckReport gradient_check(const LossClosure& loss, std::span<Parameter* const> params,
                               double epsilon, double analytic_scale) {
  for (Parameter* p : params) {
    p->grad_buffer();
    p->zero_grad();
    p->grad.fill(0.0);
  }
  loss(true);
  std::vector<Tensor2> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) analytic.push_back(p->grad);

  GradCheckReport report;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    GradCheckGroup group{p.name, 0.0};
    auto values = p.value.data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + epsilon;
      const double up = loss(false);
      values[i] = saved - epsilon;
      const double down = loss(false);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double a = analytic[k].data()[i] * analytic_scale;
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      group.max_rel_error = std::max(group.max_rel_error, std::abs(a - numeric) / denom);
    }
    report.max_rel_error = std::max(report.max_rel_error, group.max_rel_error);
    report.groups.push_back(std::move(group));
  }
  for (Parameter* p : params) {
    p->zero_grad();
    p->grad.fill(0.0);
  }
  return report;
}

}  // namespace absa
