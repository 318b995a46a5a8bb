/* Copyright 2026 The plap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "plap/regularized_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace plap {

RegularizedOperator::RegularizedOperator(AnisotropicNorm norm, double p, double eps)
    : norm_(std::move(norm)), p_(p), eps_(eps)
{
  require(std::isfinite(p) && p > 1.0, "RegularizedOperator: p must be > 1");
  require(std::isfinite(eps) && eps >= 0.0, "RegularizedOperator: eps must be >= 0");
}

double RegularizedOperator::b_eps(double t) const
{
  require(t >= 0.0, "b_eps: t must be nonnegative");
  return (std::pow(eps_ * eps_ + t * t, 0.5 * p_) - std::pow(eps_, p_)) / p_;
}

double RegularizedOperator::energy_density(const Vec& xi) const
{
  const double h = norm_.eval(xi);
  return std::pow(eps_ * eps_ + h * h, 0.5 * p_) / p_;
}

Vec RegularizedOperator::stress(const Vec& xi) const
{
  require_dim(xi, dim(), "stress");
  const double h = norm_.eval(xi);
  if (h == 0.0) return Vec::Zero(dim());
  return std::pow(eps_ * eps_ + h * h, 0.5 * (p_ - 2.0)) * h * norm_.grad(xi);
}

double RegularizedOperator::stress_dual_magnitude(const Vec& xi) const
{
  const double h = norm_.eval(xi);
  if (h == 0.0) return 0.0;
  return std::pow(eps_ * eps_ + h * h, 0.5 * (p_ - 2.0)) * h;
}

Mat RegularizedOperator::jacobian(const Vec& xi) const
{
  require_dim(xi, dim(), "stress_jacobian");
  const double h = norm_.eval(xi);
  if (h == 0.0) {
    if (eps_ == 0.0) throw std::domain_error("stress_jacobian: undefined at xi = 0 when eps = 0");
    return std::pow(eps_, p_ - 2.0) * norm_.origin_half_square_hessian();
  }
  // A = s^((p-2)/2) (grad H grad H^T + H D^2 H) + (p-2) s^((p-4)/2) H^2 grad H grad H^T
  const double s = eps_ * eps_ + h * h;
  const Vec g = norm_.grad(xi);
  const Mat gg = g * g.transpose();
  const double w = std::pow(s, 0.5 * (p_ - 2.0));
  Mat a = w * (gg + h * norm_.hess(xi)) + (p_ - 2.0) * w * (h * h / s) * gg;
  return 0.5 * (a + a.transpose());
}

double RegularizedOperator::tolksdorf_gap(const Vec& xi, const Vec& eta) const
{
  return (stress(xi) - stress(eta)).dot(xi - eta);
}

double truncate_source(double f, double eps)
{
  require(eps > 0.0, "truncate_source: eps must be > 0 (use f directly at eps = 0)");
  const double cap = 1.0 / eps;
  return std::min(std::max(f, -cap), cap);
}

std::vector<double> truncate_source(std::span<const double> f_values, double eps)
{
  std::vector<double> out(f_values.size());
  std::transform(f_values.begin(), f_values.end(), out.begin(),
                 [eps](double f) { return truncate_source(f, eps); });
  return out;
}

double fit_tolksdorf_gamma(const RegularizedOperator& op, std::span<const Vec> xis,
                           std::span<const Vec> etas)
{
  require(xis.size() == etas.size() && !xis.empty(), "fit_tolksdorf_gamma: bad sample pairs");
  double gamma = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xis.size(); ++i) {
    const double d = (xis[i] - etas[i]).norm();
    if (d == 0.0) continue;
    gamma = std::min(gamma, op.tolksdorf_gap(xis[i], etas[i]) / std::pow(d, op.p()));
  }
  return gamma;
}

}  // namespace plap
