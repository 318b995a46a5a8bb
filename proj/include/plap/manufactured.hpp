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
#include "plap/problem.hpp"

#include <functional>
#include <string>

namespace plap {

using VectorFunction = std::function<Vec(const Vec&)>;

/// Closed-form solution of -div(a(grad u)) = f with everything the
/// verification checks need to compare against.
struct ManufacturedCase {
  std::string name;
  double p = 2.0;
  int dim = 2;
  double radius = 1.0;
  Vec center;
  PointFunction u;
  VectorFunction grad;
  VectorFunction stress;  ///< a(grad u)
  PointFunction source;
  /// |grad u|^(2(p-2)) ||D^2 u||^2, constant in x for the torsion family.
  double weighted_hessian_density = 0.0;
  /// Measure of {|grad u| < delta} in R^n (before intersecting with a domain).
  std::function<double(double)> critical_measure;
};

/// Radial torsion function for f = 1 and Euclidean H:
///   u(x) = ((p-1)/p) n^(-1/(p-1)) (R^(p/(p-1)) - |x - x0|^(p/(p-1)))
/// with |grad u| = (|x - x0|/n)^(1/(p-1)) and a(grad u) = -(x - x0)/n.
ManufacturedCase manufactured_torsion(double p, int n, double radius, const Vec& center);

/// As above; throws std::invalid_argument unless H is Euclidean.
ManufacturedCase manufactured_torsion(const AnisotropicNorm& H, double p, double radius, const Vec& center);

struct ErrorNorms {
  double l2 = 0.0;       ///< ||u_h - u||_{L^2}
  double lp = 0.0;       ///< ||u_h - u||_{L^p}
  double grad_lp = 0.0;  ///< ||grad u_h - grad u||_{L^p}
  double w1p = 0.0;      ///< (lp^p + grad_lp^p)^(1/p)
};

/// Errors of a nodal field against the closed form, by degree-2 quadrature on every cell.
ErrorNorms error_norms(const Mesh& mesh, const std::vector<double>& u_h, const ManufacturedCase& mc, double p);

/// Problem on `mesh` with f = mc.source and boundary data mc.u.
ProblemSpec manufactured_problem(std::shared_ptr<const Mesh> mesh, const ManufacturedCase& mc,
                                 std::vector<double> eps_schedule);

}  // namespace plap
