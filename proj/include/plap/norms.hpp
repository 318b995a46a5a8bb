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

#include "plap/types.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace plap {

enum class NormFamily { Euclidean, WeightedEuclidean, PowerCombination };

std::string to_string(NormFamily family);

/**
 * A norm H on R^n, C^2 away from the origin, with uniformly convex unit ball.
 *
 * Three families are built in:
 *  - Euclidean:          |xi|
 *  - WeightedEuclidean:  sqrt(sum_i w_i xi_i^2), w_i > 0
 *  - PowerCombination:   (a H_sharp^q + b H_star^q)^(1/q), a, b > 0, q >= 1
 *
 * All three carry analytic gradients and Hessians. The dual norm is closed
 * form for the first two and computed by direction search for the third.
 */
class AnisotropicNorm {
public:
  static AnisotropicNorm euclidean(int dim);
  static AnisotropicNorm weighted(std::vector<double> weights);
  static AnisotropicNorm power_combination(const AnisotropicNorm& sharp, const AnisotropicNorm& star,
                                           double a, double b, double exponent);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] NormFamily family() const { return family_; }
  [[nodiscard]] bool has_analytic_derivatives() const { return true; }
  [[nodiscard]] bool has_analytic_dual() const { return family_ != NormFamily::PowerCombination; }
  [[nodiscard]] std::string describe() const;

  [[nodiscard]] double eval(const Vec& xi) const;
  /// Throws std::domain_error at xi = 0.
  [[nodiscard]] Vec grad(const Vec& xi) const;
  /// Throws std::domain_error at xi = 0.
  [[nodiscard]] Mat hess(const Vec& xi) const;
  [[nodiscard]] double dual(const Vec& x) const;

  /// Certified-by-construction constant with |xi| <= alpha * H(xi). Exact for
  /// the quadratic families, sampled and inflated by 1% otherwise.
  [[nodiscard]] double alpha() const { return alpha_; }
  /// Upper bound on |grad H| over R^n \ {0} (0-homogeneous, so a sphere sup).
  [[nodiscard]] double grad_bound() const { return grad_bound_; }

  /// D^2(H^2/2) at a nonzero point; 0-homogeneous, bounded, positive definite.
  [[nodiscard]] Mat half_square_hessian(const Vec& xi) const;
  /// Value used for D^2(H^2/2) at the origin: exact for quadratic families,
  /// the coordinate-direction average otherwise.
  [[nodiscard]] const Mat& origin_half_square_hessian() const { return origin_hess_; }

  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] double coeff_a() const { return a_; }
  [[nodiscard]] double coeff_b() const { return b_; }
  [[nodiscard]] double exponent() const { return q_; }

private:
  AnisotropicNorm() = default;
  void finalize_constants();
  [[nodiscard]] double dual_by_search(const Vec& x) const;

  NormFamily family_ = NormFamily::Euclidean;
  int dim_ = 0;
  std::vector<double> weights_;
  std::shared_ptr<const AnisotropicNorm> sharp_;
  std::shared_ptr<const AnisotropicNorm> star_;
  double a_ = 1.0;
  double b_ = 1.0;
  double q_ = 2.0;
  double alpha_ = 1.0;
  double grad_bound_ = 1.0;
  Mat origin_hess_;
};

/// Deterministic quasi-uniform directions on the unit sphere S^{n-1}. The
/// seed applies a random rotation (n=3) or angular shift (n=2).
std::vector<Vec> sphere_directions(int dim, std::size_t count, std::uint64_t seed);

/// Icosphere vertices after `subdivisions` loop subdivisions (n=3).
std::vector<Vec> icosphere_vertices(int subdivisions);

/// Maximum over samples of |H0(grad H(xi)) - 1|.
double verify_dual_identity(const AnisotropicNorm& H, std::span<const Vec> samples);

/// Sampled ellipticity constants. These are empirical bounds, not certified ones.
struct EllipticityConstants {
  double lambda = 0.0;   ///< min eigenvalue of D^2(B_eps o H) / (eps^2+|xi|^2)^((p-2)/2)
  double Lambda = 0.0;   ///< max of the same quotient
  double c_lower = 0.0;  ///< lower constant of the quadratic-form bound (equals lambda)
  double C_upper = 0.0;  ///< max of sum_ij |D^2_ij| / (eps^2+|xi|^2)^((p-2)/2)
  std::size_t sample_count = 0;
};

struct EllipticitySampling {
  std::size_t directions = 10000;
  std::size_t ratio_levels = 25;  ///< log-spaced eps/|xi| levels in [1e-3, 1e3] when eps > 0
  int refine_iterations = 40;
  std::uint64_t seed = 0;
};

/// Quotients evaluated exactly at the given nonzero points (no refinement).
EllipticityConstants estimate_ellipticity(const AnisotropicNorm& H, double p, double eps,
                                          std::span<const Vec> samples);

/// Quasi-random sampling of the quotient followed by local refinement of the
/// extremal samples. For eps > 0 the quotient depends on direction and on the
/// ratio eps/|xi|; both are sampled, including the limits 0 and infinity.
EllipticityConstants estimate_ellipticity(const AnisotropicNorm& H, double p, double eps,
                                          const EllipticitySampling& sampling = {});

/// Central-difference step used by every finite-difference cross-check.
inline double fd_step(const Vec& xi) { return 1e-5 * (1.0 + xi.norm()); }

}  // namespace plap
