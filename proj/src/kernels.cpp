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

#include "plap/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace plap {

const std::vector<QuadraturePoint>& load_quadrature(int dim)
{
  static const std::vector<QuadraturePoint> tri = {
      {{2.0 / 3, 1.0 / 6, 1.0 / 6, 0.0}, 1.0 / 3},
      {{1.0 / 6, 2.0 / 3, 1.0 / 6, 0.0}, 1.0 / 3},
      {{1.0 / 6, 1.0 / 6, 2.0 / 3, 0.0}, 1.0 / 3},
  };
  static const std::vector<QuadraturePoint> tet = [] {
    const double a = 0.5854101966249685;
    const double b = 0.1381966011250105;
    return std::vector<QuadraturePoint>{
        {{a, b, b, b}, 0.25}, {{b, a, b, b}, 0.25}, {{b, b, a, b}, 0.25}, {{b, b, b, a}, 0.25}};
  }();
  return dim == 2 ? tri : tet;
}

Assembler::Assembler(std::shared_ptr<const Mesh> mesh, Backend backend)
    : mesh_(std::move(mesh)), backend_(backend)
{
  require(mesh_ != nullptr, "Assembler: null mesh");
  const Mesh& m = *mesh_;
  const int nv = m.vertices_per_cell();
  free_index_.assign(m.num_nodes(), -1);
  for (std::size_t i = 0; i < m.num_nodes(); ++i) {
    if (!m.is_boundary(i)) {
      free_index_[i] = static_cast<int>(free_nodes_.size());
      free_nodes_.push_back(static_cast<int>(i));
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m.num_cells() * nv * nv);
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const auto& cell = m.cell(c);
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < nv; ++b) {
        const int i = free_index_[cell[a]];
        const int j = free_index_[cell[b]];
        if (i >= 0 && j >= 0) trip.emplace_back(i, j, 1.0);
      }
  }
  const auto n = static_cast<Eigen::Index>(free_nodes_.size());
  matrix_.resize(n, n);
  matrix_.setFromTriplets(trip.begin(), trip.end());
  matrix_.makeCompressed();

  auto entry_of = [&](int i, int j) {
    const int* begin = matrix_.innerIndexPtr() + matrix_.outerIndexPtr()[j];
    const int* end = matrix_.innerIndexPtr() + matrix_.outerIndexPtr()[j + 1];
    return static_cast<int>(std::lower_bound(begin, end, i) - matrix_.innerIndexPtr());
  };
  cell_entry_.assign(m.num_cells() * nv * nv, -1);
  entry_offsets_.assign(static_cast<std::size_t>(matrix_.nonZeros()) + 1, 0);
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const auto& cell = m.cell(c);
    for (int a = 0; a < nv; ++a)
      for (int b = 0; b < nv; ++b) {
        const int i = free_index_[cell[a]];
        const int j = free_index_[cell[b]];
        if (i < 0 || j < 0) continue;
        const int k = entry_of(i, j);
        cell_entry_[(c * nv + a) * nv + b] = k;
        ++entry_offsets_[k + 1];
      }
  }
  for (std::size_t k = 1; k < entry_offsets_.size(); ++k) entry_offsets_[k] += entry_offsets_[k - 1];
  entry_slots_.resize(entry_offsets_.back());
  std::vector<std::size_t> fill(entry_offsets_.begin(), entry_offsets_.end() - 1);
  for (std::size_t slot = 0; slot < cell_entry_.size(); ++slot) {
    const int k = cell_entry_[slot];
    if (k >= 0) entry_slots_[fill[k]++] = slot;
  }
}

template <class CellKernel>
void Assembler::gather_nodes(int width, const CellKernel& kernel, std::vector<double>& out) const
{
  const Mesh& m = *mesh_;
  const int nv = m.vertices_per_cell();
  const auto nc = static_cast<std::ptrdiff_t>(m.num_cells());
  const auto nn = static_cast<std::ptrdiff_t>(m.num_nodes());
  out.assign(m.num_nodes() * width, 0.0);
  if (backend_ == Backend::Serial) {
    std::array<double, (kMaxDim + 1) * kMaxDim> local{};
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
      kernel(static_cast<std::size_t>(c), local.data());
      const auto& cell = m.cell(c);
      for (int k = 0; k < nv; ++k)
        for (int w = 0; w < width; ++w) out[cell[k] * width + w] += local[k * width + w];
    }
    return;
  }
  cell_buffer_.resize(m.num_cells() * nv * width);
  double* buf = cell_buffer_.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) kernel(static_cast<std::size_t>(c), buf + c * nv * width);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nn; ++i) {
    for (const auto& inc : m.node_cells(i)) {
      const double* src = buf + (static_cast<std::size_t>(inc.cell) * nv + inc.local) * width;
      for (int w = 0; w < width; ++w) out[i * width + w] += src[w];
    }
  }
}

double Assembler::gradient_energy(const RegularizedOperator& op, const std::vector<double>& v) const
{
  const Mesh& m = *mesh_;
  require(v.size() == m.num_nodes(), "gradient_energy: field size does not match the mesh");
  const int dim = m.dim();
  auto density = [&](std::size_t c) {
    const auto& cell = m.cell(c);
    const double* bg = m.basis_gradient_data(c);
    Vec g = Vec::Zero(dim);
    for (int k = 0; k <= dim; ++k)
      for (int d = 0; d < dim; ++d) g(d) += v[cell[k]] * bg[k * dim + d];
    return op.energy_density(g) * m.volume(c);
  };
  const auto nc = static_cast<std::ptrdiff_t>(m.num_cells());
  double sum = 0.0;
  if (backend_ == Backend::Serial) {
    for (std::ptrdiff_t c = 0; c < nc; ++c) sum += density(c);
    return sum;
  }
  cell_buffer_.resize(m.num_cells());
  double* buf = cell_buffer_.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) buf[c] = density(c);
  for (std::ptrdiff_t c = 0; c < nc; ++c) sum += buf[c];
  return sum;
}

std::vector<double> Assembler::stress_residual(const RegularizedOperator& op, const std::vector<double>& v) const
{
  const Mesh& m = *mesh_;
  require(v.size() == m.num_nodes(), "stress_residual: field size does not match the mesh");
  const int dim = m.dim();
  std::vector<double> out;
  gather_nodes(
      1,
      [&](std::size_t c, double* local) {
        const auto& cell = m.cell(c);
        const double* bg = m.basis_gradient_data(c);
        Vec g = Vec::Zero(dim);
        for (int k = 0; k <= dim; ++k)
          for (int d = 0; d < dim; ++d) g(d) += v[cell[k]] * bg[k * dim + d];
        const Vec a = op.stress(g) * m.volume(c);
        for (int k = 0; k <= dim; ++k) {
          double s = 0.0;
          for (int d = 0; d < dim; ++d) s += a(d) * bg[k * dim + d];
          local[k] = s;
        }
      },
      out);
  return out;
}

const Eigen::SparseMatrix<double>& Assembler::hessian(const RegularizedOperator& op, const std::vector<double>& v,
                                                      double eps_floor) const
{
  const Mesh& m = *mesh_;
  require(v.size() == m.num_nodes(), "hessian: field size does not match the mesh");
  const int dim = m.dim();
  const int nv = dim + 1;
  const RegularizedOperator floored(op.norm(), op.p(), eps_floor);
  auto local_matrix = [&](std::size_t c, double* local) {
    const auto& cell = m.cell(c);
    const double* bg = m.basis_gradient_data(c);
    Vec g = Vec::Zero(dim);
    for (int k = 0; k <= dim; ++k)
      for (int d = 0; d < dim; ++d) g(d) += v[cell[k]] * bg[k * dim + d];
    const bool degenerate = op.eps() == 0.0 && g.isZero(0.0);
    const Mat a = (degenerate ? floored.jacobian(g) : op.jacobian(g)) * m.volume(c);
    for (int i = 0; i < nv; ++i) {
      const Eigen::Map<const Eigen::VectorXd> gi(bg + i * dim, dim);
      const Vec agi = a * gi;
      for (int j = 0; j < nv; ++j) {
        double s = 0.0;
        for (int d = 0; d < dim; ++d) s += agi(d) * bg[j * dim + d];
        local[i * nv + j] = s;
      }
    }
  };
  double* values = matrix_.valuePtr();
  const auto nnz = static_cast<std::ptrdiff_t>(matrix_.nonZeros());
  const auto nc = static_cast<std::ptrdiff_t>(m.num_cells());
  std::fill(values, values + nnz, 0.0);
  if (backend_ == Backend::Serial) {
    std::array<double, (kMaxDim + 1) * (kMaxDim + 1)> local{};
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
      local_matrix(c, local.data());
      for (int s = 0; s < nv * nv; ++s) {
        const int k = cell_entry_[c * nv * nv + s];
        if (k >= 0) values[k] += local[s];
      }
    }
    return matrix_;
  }
  cell_buffer_.resize(m.num_cells() * nv * nv);
  double* buf = cell_buffer_.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) local_matrix(c, buf + c * nv * nv);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < nnz; ++k) {
    double s = 0.0;
    for (std::size_t t = entry_offsets_[k]; t < entry_offsets_[k + 1]; ++t) s += buf[entry_slots_[t]];
    values[k] = s;
  }
  return matrix_;
}

std::vector<double> Assembler::load_vector(const ProblemSpec& spec, double eps) const
{
  const Mesh& m = *mesh_;
  const int dim = m.dim();
  const auto& quad = load_quadrature(dim);
  std::vector<double> out;
  gather_nodes(
      1,
      [&](std::size_t c, double* local) {
        const auto& cell = m.cell(c);
        for (int k = 0; k <= dim; ++k) local[k] = 0.0;
        for (const auto& q : quad) {
          Vec x = Vec::Zero(dim);
          for (int k = 0; k <= dim; ++k) x += q.bary[k] * m.node(cell[k]);
          double f = spec.source_at(c, q.bary, x);
          if (eps > 0.0) f = truncate_source(f, eps);
          const double w = f * q.weight * m.volume(c);
          for (int k = 0; k <= dim; ++k) local[k] += w * q.bary[k];
        }
      },
      out);
  return out;
}

}  // namespace plap
