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

#include "plap/problem.hpp"

#include <algorithm>
#include <cmath>

namespace plap {

void ProblemSpec::validate() const
{
  require(mesh != nullptr, "ProblemSpec: mesh is not set");
  require(norm.dim() == mesh->dim(), "ProblemSpec: norm and mesh dimensions differ");
  require(std::isfinite(p) && p > 1.0, "ProblemSpec: p must be > 1");
  require(source || source_nodal.size() == mesh->num_nodes(),
          "ProblemSpec: source must be a function or one value per node");
  require(boundary.size() == mesh->num_nodes(), "ProblemSpec: boundary data must have one value per node");
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    require(!mesh->is_boundary(i) || std::isfinite(boundary[i]), "ProblemSpec: boundary data must be finite");
  }
  require(!eps_schedule.empty(), "ProblemSpec: empty eps schedule");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    require(eps_schedule[k] >= 0.0 && eps_schedule[k] < 1.0, "ProblemSpec: eps values must lie in [0, 1)");
    require(k == 0 || eps_schedule[k] < eps_schedule[k - 1], "ProblemSpec: eps schedule must be strictly decreasing");
  }
  require(eps_schedule.back() > 0.0 || p >= 2.0, "ProblemSpec: eps = 0 is only allowed for p >= 2");
  require(tol.grad_tol > 0.0 && tol.max_iter > 0, "ProblemSpec: invalid solver tolerances");
}

double ProblemSpec::source_at(std::size_t cell, const std::array<double, kMaxDim + 1>& bary, const Vec& x) const
{
  if (source) return source(x);
  const auto& c = mesh->cell(cell);
  double f = 0.0;
  for (int k = 0; k < mesh->vertices_per_cell(); ++k) f += bary[k] * source_nodal[c[k]];
  return f;
}

ScalarField ProblemSpec::source_field() const
{
  if (source) return {Location::Node, sample_nodes(*mesh, source)};
  return {Location::Node, source_nodal};
}

std::vector<double> default_eps_schedule(double h)
{
  const double floor = std::max(1e-4, h);
  std::vector<double> out;
  for (double e = 0.5; e >= floor; e *= 0.5) out.push_back(e);
  if (out.empty()) out.push_back(0.5);
  return out;
}

std::vector<double> sample_nodes(const Mesh& mesh, const PointFunction& g)
{
  std::vector<double> out(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) out[i] = g(mesh.node(i));
  return out;
}

}  // namespace plap
