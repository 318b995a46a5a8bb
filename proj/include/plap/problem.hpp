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

#include "plap/mesh.hpp"
#include "plap/norms.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace plap {

using PointFunction = std::function<double(const Vec&)>;

struct SolverTolerances {
  double grad_tol = 1e-10;    ///< stop when the Euclidean norm of the free gradient is below this
  double energy_tol = 0.0;    ///< also stop when a step lowers the energy by less than this (0: off)
  int max_iter = 200;
};

/// One solvable instance of the regularized Dirichlet problem.
struct ProblemSpec {
  std::shared_ptr<const Mesh> mesh;
  AnisotropicNorm norm = AnisotropicNorm::euclidean(2);
  double p = 2.0;
  /// Closed-form source, sampled at quadrature points. Takes precedence over source_nodal.
  PointFunction source;
  /// Nodal source values, interpolated linearly to quadrature points.
  std::vector<double> source_nodal;
  /// Nodal values; only entries at boundary nodes are used.
  std::vector<double> boundary;
  std::vector<double> eps_schedule;
  SolverTolerances tol;
  std::string name = "instance";

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  /// Source value at a point, before truncation.
  [[nodiscard]] double source_at(std::size_t cell, const std::array<double, kMaxDim + 1>& bary,
                                 const Vec& x) const;
  /// Source at the nodes (closed form sampled, or the nodal data).
  [[nodiscard]] ScalarField source_field() const;
};

/// Geometric schedule 0.5^k, k = 1, 2, ..., keeping every value >= max(1e-4, h).
std::vector<double> default_eps_schedule(double h);

/// Nodal values of g at every node (interior entries included).
std::vector<double> sample_nodes(const Mesh& mesh, const PointFunction& g);

}  // namespace plap
