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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace plap {

/// Cellwise-constant gradient of a P1 field. Exact for affine u.
VectorField gradient(const Mesh& mesh, const ScalarField& u);

/// Nodal Jacobian of a cell vector field: at every interior node, the
/// least-squares affine fit g0 + G (x - x_node) of the cell values over the
/// node's patch (sampled at centroids) gives G. Boundary nodes are invalid.
MatrixField recover_gradient(const Mesh& mesh, const VectorField& cell_field);

/// Recovered Hessian: symmetric part of recover_gradient(gradient(u)).
/// Exact for quadratics at interior nodes of the structured mesh.
MatrixField hessian(const Mesh& mesh, const ScalarField& u);

/// Vertex average of a nodal field on each cell.
ScalarField to_cells(const Mesh& mesh, const ScalarField& nodal);

/// sum_c g_c * w_c * |c| * region_c, where g_c is the cell value (vertex
/// average for nodal fields) and w_c the optional weight, converted the same way.
double integrate(const Mesh& mesh, const ScalarField& g, const Region& region,
                 const ScalarField* weight = nullptr);

/// (integral of |g|^q)^(1/q). Throws for q < 1.
double lq_norm(const Mesh& mesh, const ScalarField& g, double q, const Region& region);

/// ||grad u||_{L^p(region)} with the Euclidean length of the cell gradient.
double sobolev_seminorm(const Mesh& mesh, const ScalarField& u, double p, const Region& region);

struct MorreyEstimate {
  double value = 0.0;
  std::size_t samples = 0;
};

/// max over (center, rho) of [rho^-lambda * integral_{B_rho} f^2]^(1/2). A
/// sampled lower bound of the Morrey norm. Rejects lambda outside (n-2, n)
/// and balls that are not compactly contained in the mesh box.
MorreyEstimate morrey_norm(const Mesh& mesh, const ScalarField& f, double lambda,
                           std::span<const Vec> centers, std::span<const double> radii);

struct HolderEstimate {
  double seminorm = 0.0;  ///< max |F(x) - F(y)| / |x - y|^alpha over the sampled pairs
  double sup = 0.0;       ///< max |F| over the points
  std::size_t pairs = 0;
  [[nodiscard]] double norm() const { return seminorm + sup; }
};

/// Sampled C^{0,alpha} norm of point values. All pairs are used when there
/// are at most `pair_samples` of them; otherwise a seeded pair stream whose
/// first k pairs do not depend on `pair_samples`, so more samples never
/// lower the estimate.
HolderEstimate holder_seminorm(std::span<const Vec> points, std::span<const Vec> values, double alpha,
                               std::size_t pair_samples, std::uint64_t seed);

/// CSV with header `x,y[,z],name...` and one row per node or cell.
void write_field_csv(std::ostream& out, const Mesh& mesh, Location location,
                     const std::vector<std::string>& names,
                     const std::vector<const std::vector<double>*>& columns);

}  // namespace plap
