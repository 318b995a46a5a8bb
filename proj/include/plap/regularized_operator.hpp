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

#pragma once

#include "plap/norms.hpp"
#include "plap/types.hpp"

#include <span>
#include <vector>

namespace plap {

/**
 * Pointwise nonlinear ingredients of the regularized problem for a fixed
 * (H, p, eps):
 *
 *   B_eps(t)  = ((eps^2 + t^2)^(p/2) - eps^p) / p
 *   a_eps(xi) = (eps^2 + H^2)^((p-2)/2) H grad H,   a_eps(0) = 0
 *   A_eps(xi) = D a_eps(xi) = D^2 (B_eps o H)(xi)
 *
 * eps = 0 recovers the unregularized stress a(xi) = H^(p-1) grad H.
 */
class RegularizedOperator {
public:
  RegularizedOperator(AnisotropicNorm norm, double p, double eps);

  [[nodiscard]] const AnisotropicNorm& norm() const { return norm_; }
  [[nodiscard]] double p() const { return p_; }
  [[nodiscard]] double eps() const { return eps_; }
  [[nodiscard]] int dim() const { return norm_.dim(); }

  /// Throws std::invalid_argument for t < 0.
  [[nodiscard]] double b_eps(double t) const;

  /// (1/p)(eps^2 + H^2(xi))^(p/2): the energy density (no -eps^p/p shift).
  [[nodiscard]] double energy_density(const Vec& xi) const;

  [[nodiscard]] Vec stress(const Vec& xi) const;

  /// Symmetric Jacobian of the stress. At xi = 0 with eps > 0 the limit
  /// eps^(p-2) D^2(H^2/2) is returned; at xi = 0 with eps = 0 this throws
  /// std::domain_error.
  [[nodiscard]] Mat jacobian(const Vec& xi) const;

  /// (a_eps(xi) - a_eps(eta)) . (xi - eta); nonnegative by monotonicity.
  [[nodiscard]] double tolksdorf_gap(const Vec& xi, const Vec& eta) const;

  /// [eps^2 + H^2(xi)]^((p-2)/2) H(xi), which equals H0(a_eps(xi)).
  [[nodiscard]] double stress_dual_magnitude(const Vec& xi) const;

private:
  AnisotropicNorm norm_;
  double p_;
  double eps_;
};

/// Clamp f to [-1/eps, 1/eps]. Throws std::invalid_argument for eps <= 0.
double truncate_source(double f, double eps);
std::vector<double> truncate_source(std::span<const double> f_values, double eps);

/// Empirical gamma_0 in gap(xi, eta) >= gamma_0 |xi - eta|^p (p >= 2): the
/// minimum of the ratio over the given pairs.
double fit_tolksdorf_gamma(const RegularizedOperator& op, std::span<const Vec> xis,
                           std::span<const Vec> etas);

}  // namespace plap
