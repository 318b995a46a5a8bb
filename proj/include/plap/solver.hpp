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

#include "plap/kernels.hpp"
#include "plap/problem.hpp"

#include <optional>
#include <vector>

namespace plap {

struct SolveReport {
  std::vector<double> u;  ///< nodal field u_eps
  double eps = 0.0;
  std::vector<double> energy_history;     ///< J_eps at each iterate, starting point first
  std::vector<double> gradient_history;   ///< free gradient norm at each iterate
  int iterations = 0;
  int newton_steps = 0;
  int gradient_steps = 0;  ///< Barzilai-Borwein fallback steps
  double wall_seconds = 0.0;
  bool line_search_failed = false;
  bool converged = false;
  /// ||u_eps - u_prev||_{W^{1,p}} against the previous continuation stage (0 for the first).
  double increment = 0.0;
};

/// Minimizes the discrete regularized energy
///   J_eps(v) = (1/p) integral (eps^2 + H^2(grad v))^(p/2) - integral f_eps v
/// over P1 fields that match the boundary data, by damped Newton with an
/// Armijo backtracking line search.
class Solver {
public:
  explicit Solver(ProblemSpec spec, Backend backend = Backend::OpenMP);

  [[nodiscard]] const ProblemSpec& spec() const { return spec_; }
  [[nodiscard]] const Assembler& assembler() const { return assembler_; }

  [[nodiscard]] double energy(const std::vector<double>& v, double eps) const;
  /// Gradient of J_eps with respect to the free nodal values (one entry per free node).
  [[nodiscard]] std::vector<double> energy_gradient(const std::vector<double>& v, double eps) const;

  /// Requires eps > 0, or eps = 0 with p >= 2. Never reports success without
  /// meeting the gradient tolerance.
  [[nodiscard]] SolveReport minimize(double eps, const std::optional<std::vector<double>>& warm_start = {}) const;

  /// One minimize per schedule entry, each warm-started from the previous.
  [[nodiscard]] std::vector<SolveReport> continuation_solve() const;

  /// Boundary data on boundary nodes, zero inside.
  [[nodiscard]] std::vector<double> initial_guess() const;

private:
  void check_boundary(const std::vector<double>& v) const;
  std::vector<double> load(double eps) const;

  ProblemSpec spec_;
  Assembler assembler_;
};

/// ||a - b||_{W^{1,p}} = (||a-b||_p^p + ||grad(a-b)||_p^p)^(1/p) over the whole mesh.
double w1p_distance(const Mesh& mesh, const std::vector<double>& a, const std::vector<double>& b, double p);

/// Homogeneous Dirichlet P1 solution of -Laplace w = f.
ScalarField poisson_solve(std::shared_ptr<const Mesh> mesh, const PointFunction& f);
ScalarField poisson_solve(std::shared_ptr<const Mesh> mesh, const ScalarField& f_nodal);

/// max over free nodes i of |integral grad w . grad phi_i - integral f phi_i|.
double galerkin_residual(std::shared_ptr<const Mesh> mesh, const ScalarField& w, const PointFunction& f);

}  // namespace plap
