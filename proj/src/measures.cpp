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

#include "plap/measures.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

namespace plap {

namespace {

void require_nodal(const Mesh& mesh, const ScalarField& u, const char* where)
{
  require(u.location == Location::Node && u.values.size() == mesh.num_nodes(),
          std::string(where) + ": expected a nodal field on this mesh");
}

double cell_value(const Mesh& mesh, const ScalarField& g, std::size_t c)
{
  if (g.location == Location::Cell) return g.values[c];
  const auto& cell = mesh.cell(c);
  double s = 0.0;
  for (int k = 0; k < mesh.vertices_per_cell(); ++k) s += g.values[cell[k]];
  return s / mesh.vertices_per_cell();
}

void require_matching(const Mesh& mesh, const ScalarField& g, const char* where)
{
  const std::size_t expected = g.location == Location::Node ? mesh.num_nodes() : mesh.num_cells();
  require(g.values.size() == expected, std::string(where) + ": field size does not match the mesh");
}

}  // namespace

VectorField gradient(const Mesh& mesh, const ScalarField& u)
{
  require_nodal(mesh, u, "gradient");
  const int dim = mesh.dim();
  VectorField g{Location::Cell, dim, std::vector<double>(mesh.num_cells() * dim, 0.0)};
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cell(c);
    const double* bg = mesh.basis_gradient_data(c);
    for (int k = 0; k <= dim; ++k) {
      const double uk = u.values[cell[k]];
      for (int d = 0; d < dim; ++d) g.values[c * dim + d] += uk * bg[k * dim + d];
    }
  }
  return g;
}

MatrixField recover_gradient(const Mesh& mesh, const VectorField& cell_field)
{
  require(cell_field.location == Location::Cell && cell_field.dim == mesh.dim() &&
              cell_field.size() == mesh.num_cells(),
          "recover_gradient: expected a cell vector field on this mesh");
  const int dim = mesh.dim();
  const int m = dim + 1;
  MatrixField out{Location::Node, dim, std::vector<double>(mesh.num_nodes() * dim * dim, 0.0),
                  std::vector<unsigned char>(mesh.num_nodes(), 0)};
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.is_boundary(i)) continue;
    const Vec xi = mesh.node(i);
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4> normal =
        Eigen::MatrixXd::Zero(m, m);
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 3> rhs = Eigen::MatrixXd::Zero(m, dim);
    for (const auto& inc : mesh.node_cells(i)) {
      Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1> row(m);
      row(0) = 1.0;
      row.tail(dim) = mesh.centroid(inc.cell) - xi;
      normal.noalias() += row * row.transpose();
      rhs.noalias() += row * cell_field.at(inc.cell).transpose();
    }
    const auto coeffs = normal.ldlt().solve(rhs).eval();
    // coeffs(1 + k, j) = d g_j / d x_k
    Mat jac(dim, dim);
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) jac(j, k) = coeffs(1 + k, j);
    out.set(i, jac);
    out.valid[i] = 1;
  }
  return out;
}

MatrixField hessian(const Mesh& mesh, const ScalarField& u)
{
  MatrixField h = recover_gradient(mesh, gradient(mesh, u));
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!h.valid[i]) continue;
    const Mat j = h.at(i);
    h.set(i, 0.5 * (j + j.transpose()));
  }
  return h;
}

ScalarField to_cells(const Mesh& mesh, const ScalarField& nodal)
{
  require_nodal(mesh, nodal, "to_cells");
  ScalarField out{Location::Cell, std::vector<double>(mesh.num_cells())};
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) out.values[c] = cell_value(mesh, nodal, c);
  return out;
}

double integrate(const Mesh& mesh, const ScalarField& g, const Region& region, const ScalarField* weight)
{
  require_matching(mesh, g, "integrate");
  require(region.num_cells() == mesh.num_cells(), "integrate: region was built on a different mesh");
  if (weight != nullptr) require_matching(mesh, *weight, "integrate(weight)");
  double sum = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const double r = region.weight(c);
    if (r == 0.0) continue;
    double v = cell_value(mesh, g, c) * mesh.volume(c) * r;
    if (weight != nullptr) v *= cell_value(mesh, *weight, c);
    sum += v;
  }
  return sum;
}

double lq_norm(const Mesh& mesh, const ScalarField& g, double q, const Region& region)
{
  require(q >= 1.0, "lq_norm: q must be >= 1");
  require_matching(mesh, g, "lq_norm");
  ScalarField cells = g.location == Location::Cell ? g : to_cells(mesh, g);
  for (double& v : cells.values) v = std::pow(std::abs(v), q);
  return std::pow(integrate(mesh, cells, region), 1.0 / q);
}

double sobolev_seminorm(const Mesh& mesh, const ScalarField& u, double p, const Region& region)
{
  require(p >= 1.0, "sobolev_seminorm: p must be >= 1");
  const VectorField g = gradient(mesh, u);
  ScalarField mag{Location::Cell, std::vector<double>(mesh.num_cells())};
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) mag.values[c] = std::pow(g.at(c).norm(), p);
  return std::pow(integrate(mesh, mag, region), 1.0 / p);
}

MorreyEstimate morrey_norm(const Mesh& mesh, const ScalarField& f, double lambda,
                           std::span<const Vec> centers, std::span<const double> radii)
{
  const int n = mesh.dim();
  require(lambda > n - 2 && lambda < n, "morrey_norm: lambda must lie in (n-2, n)");
  require(!centers.empty() && !radii.empty(), "morrey_norm: empty sample set");
  require_matching(mesh, f, "morrey_norm");
  ScalarField f2 = f;
  for (double& v : f2.values) v *= v;
  MorreyEstimate out;
  for (const Vec& c : centers) {
    for (double rho : radii) {
      require_compact_ball(mesh, c, rho, "morrey_norm");
      const Region ball = Region::ball(mesh, c, rho);
      const double v = std::sqrt(std::pow(rho, -lambda) * integrate(mesh, f2, ball));
      out.value = std::max(out.value, v);
      ++out.samples;
    }
  }
  return out;
}

HolderEstimate holder_seminorm(std::span<const Vec> points, std::span<const Vec> values, double alpha,
                               std::size_t pair_samples, std::uint64_t seed)
{
  require(alpha > 0.0 && alpha < 1.0, "holder_seminorm: alpha must lie in (0, 1)");
  require(!points.empty() && points.size() == values.size(), "holder_seminorm: empty or mismatched region");
  HolderEstimate out;
  for (const Vec& v : values) out.sup = std::max(out.sup, v.norm());
  const std::size_t n = points.size();
  auto visit = [&](std::size_t i, std::size_t j) {
    const double d = (points[i] - points[j]).norm();
    if (d == 0.0) return;
    out.seminorm = std::max(out.seminorm, (values[i] - values[j]).norm() / std::pow(d, alpha));
    ++out.pairs;
  };
  const std::size_t all_pairs = n * (n - 1) / 2;
  if (all_pairs <= pair_samples) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) visit(i, j);
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t s = 0; s < pair_samples; ++s) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (i != j) visit(i, j);
  }
  return out;
}

void write_field_csv(std::ostream& out, const Mesh& mesh, Location location,
                     const std::vector<std::string>& names,
                     const std::vector<const std::vector<double>*>& columns)
{
  require(names.size() == columns.size(), "write_field_csv: one name per column");
  const std::size_t rows = location == Location::Node ? mesh.num_nodes() : mesh.num_cells();
  for (const auto* col : columns) {
    require(col != nullptr && col->size() == rows, "write_field_csv: column length does not match the mesh");
  }
  static const char* axes[] = {"x", "y", "z"};
  for (int d = 0; d < mesh.dim(); ++d) out << (d ? "," : "") << axes[d];
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t r = 0; r < rows; ++r) {
    const Vec x = location == Location::Node ? mesh.node(r) : mesh.centroid(r);
    for (int d = 0; d < mesh.dim(); ++d) out << (d ? "," : "") << x(d);
    for (const auto* col : columns) out << ',' << (*col)[r];
    out << '\n';
  }
}

}  // namespace plap
