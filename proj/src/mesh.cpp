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

#include "plap/mesh.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace plap {

namespace {

double factorial(int n)
{
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

Mesh Mesh::structured(const Box& box, std::vector<int> cells_per_axis)
{
  const int dim = box.dim();
  require(dim == 2 || dim == 3, "Mesh: dimension must be 2 or 3");
  require(box.hi.size() == dim, "Mesh: box corners have different dimensions");
  require(static_cast<int>(cells_per_axis.size()) == dim, "Mesh: one resolution per axis required");
  for (int k = 0; k < dim; ++k) {
    require(box.hi(k) > box.lo(k), "Mesh: empty box");
    require(cells_per_axis[k] >= 1, "Mesh: resolution must be >= 1");
  }

  Mesh m;
  m.dim_ = dim;
  m.box_ = box;
  m.cells_per_axis_ = cells_per_axis;

  std::array<int, kMaxDim> nn{1, 1, 1};
  std::array<double, kMaxDim> dx{0, 0, 0};
  for (int k = 0; k < dim; ++k) {
    nn[k] = cells_per_axis[k] + 1;
    dx[k] = (box.hi(k) - box.lo(k)) / cells_per_axis[k];
    m.h_ = std::max(m.h_, dx[k]);
  }
  auto node_id = [&](const std::array<int, kMaxDim>& idx) {
    return idx[0] + nn[0] * (idx[1] + nn[1] * idx[2]);
  };

  const std::size_t num_nodes = static_cast<std::size_t>(nn[0]) * nn[1] * nn[2];
  m.coords_.resize(num_nodes * dim);
  m.boundary_.assign(num_nodes, 0);
  for (int k2 = 0; k2 < nn[2]; ++k2) {
    for (int k1 = 0; k1 < nn[1]; ++k1) {
      for (int k0 = 0; k0 < nn[0]; ++k0) {
        const std::array<int, kMaxDim> idx{k0, k1, k2};
        const std::size_t id = node_id(idx);
        bool on_boundary = false;
        for (int k = 0; k < dim; ++k) {
          // Pin the far edge to hi exactly so the box is reproduced bit for bit.
          m.coords_[id * dim + k] = idx[k] == cells_per_axis[k] ? box.hi(k) : box.lo(k) + idx[k] * dx[k];
          on_boundary = on_boundary || idx[k] == 0 || idx[k] == cells_per_axis[k];
        }
        m.boundary_[id] = on_boundary ? 1 : 0;
      }
    }
  }

  // Kuhn simplices: walk from the low corner to the high corner, one axis at a time.
  std::vector<std::array<int, kMaxDim>> perms;
  {
    std::array<int, kMaxDim> perm{0, 1, 2};
    do {
      perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.begin() + dim));
  }
  const int cz = dim == 3 ? cells_per_axis[2] : 1;
  for (int c2 = 0; c2 < cz; ++c2) {
    for (int c1 = 0; c1 < cells_per_axis[1]; ++c1) {
      for (int c0 = 0; c0 < cells_per_axis[0]; ++c0) {
        for (const auto& perm : perms) {
          std::array<int, kMaxDim> idx{c0, c1, c2};
          Cell cell{};
          cell[0] = node_id(idx);
          for (int s = 0; s < dim; ++s) {
            ++idx[perm[s]];
            cell[s + 1] = node_id(idx);
          }
          m.cells_.push_back(cell);
        }
      }
    }
  }

  const std::size_t nc = m.cells_.size();
  const int nv = dim + 1;
  m.volumes_.resize(nc);
  m.centroids_.assign(nc * dim, 0.0);
  m.basis_grads_.resize(nc * nv * dim);
  for (std::size_t c = 0; c < nc; ++c) {
    const Cell& cell = m.cells_[c];
    const Vec x0 = m.node(cell[0]);
    Mat jac(dim, dim);
    for (int k = 1; k <= dim; ++k) jac.col(k - 1) = m.node(cell[k]) - x0;
    const double det = jac.determinant();
    require(det != 0.0, "Mesh: degenerate cell");
    m.volumes_[c] = std::abs(det) / factorial(dim);
    const Mat inv = jac.inverse();
    Vec g0 = Vec::Zero(dim);
    for (int k = 1; k <= dim; ++k) {
      const Vec gk = inv.row(k - 1).transpose();
      g0 -= gk;
      for (int d = 0; d < dim; ++d) m.basis_grads_[(c * nv + k) * dim + d] = gk(d);
    }
    for (int d = 0; d < dim; ++d) m.basis_grads_[(c * nv) * dim + d] = g0(d);
    Vec centroid = Vec::Zero(dim);
    for (int k = 0; k < nv; ++k) centroid += m.node(cell[k]);
    centroid /= nv;
    for (int d = 0; d < dim; ++d) m.centroids_[c * dim + d] = centroid(d);
  }

  // Node -> cell incidence, cells in increasing order per node.
  m.incidence_offsets_.assign(num_nodes + 1, 0);
  for (const Cell& cell : m.cells_)
    for (int k = 0; k < nv; ++k) ++m.incidence_offsets_[cell[k] + 1];
  std::partial_sum(m.incidence_offsets_.begin(), m.incidence_offsets_.end(), m.incidence_offsets_.begin());
  m.incidence_.resize(m.incidence_offsets_.back());
  std::vector<std::size_t> fill(m.incidence_offsets_.begin(), m.incidence_offsets_.end() - 1);
  for (std::size_t c = 0; c < nc; ++c)
    for (int k = 0; k < nv; ++k)
      m.incidence_[fill[m.cells_[c][k]]++] = {static_cast<int>(c), k};
  return m;
}

Box Mesh::cell_bounds(std::size_t c) const
{
  Box b{node(cells_[c][0]), node(cells_[c][0])};
  for (int k = 1; k <= dim_; ++k) {
    const Vec x = node(cells_[c][k]);
    b.lo = b.lo.cwiseMin(x);
    b.hi = b.hi.cwiseMax(x);
  }
  return b;
}

Mesh::FacetCounts Mesh::facet_counts() const
{
  std::map<std::array<int, kMaxDim>, int> counts;
  for (const Cell& cell : cells_) {
    for (int skip = 0; skip <= dim_; ++skip) {
      std::array<int, kMaxDim> facet{-1, -1, -1};
      int k = 0;
      for (int v = 0; v <= dim_; ++v)
        if (v != skip) facet[k++] = cell[v];
      std::sort(facet.begin(), facet.begin() + dim_);
      ++counts[facet];
    }
  }
  FacetCounts out;
  for (const auto& [facet, n] : counts) {
    if (n == 2) ++out.interior;
    else if (n == 1) ++out.boundary;
    else ++out.other;
  }
  return out;
}

const std::vector<std::array<double, kMaxDim + 1>>& cell_subsamples(int dim)
{
  static const std::vector<std::array<double, kMaxDim + 1>> pts2 = [] {
    std::vector<std::array<double, kMaxDim + 1>> out;
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; i + j <= 3; ++j) {
        const int l = 3 - i - j;
        out.push_back({(i + 1.0 / 3) / 4, (j + 1.0 / 3) / 4, (l + 1.0 / 3) / 4, 0.0});
      }
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; i + j <= 2; ++j) {
        const int l = 2 - i - j;
        out.push_back({(i + 2.0 / 3) / 4, (j + 2.0 / 3) / 4, (l + 2.0 / 3) / 4, 0.0});
      }
    return out;
  }();
  static const std::vector<std::array<double, kMaxDim + 1>> pts3 = [] {
    std::vector<std::array<double, kMaxDim + 1>> out;
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; i + j <= 4; ++j)
        for (int k = 0; i + j + k <= 4; ++k) {
          const int l = 4 - i - j - k;
          out.push_back({(i + 0.25) / 5, (j + 0.25) / 5, (k + 0.25) / 5, (l + 0.25) / 5});
        }
    return out;
  }();
  return dim == 2 ? pts2 : pts3;
}

namespace {

// Fraction of the cell's subsample points with r_in <= |x - center| < r_out.
std::vector<double> shell_weights(const Mesh& mesh, const Vec& center, double r_in, double r_out)
{
  const int dim = mesh.dim();
  const auto& sub = cell_subsamples(dim);
  std::vector<double> w(mesh.num_cells(), 0.0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const Box b = mesh.cell_bounds(c);
    const Vec nearest = center.cwiseMax(b.lo).cwiseMin(b.hi);
    const double dmin = (nearest - center).norm();
    const double dmax = (b.lo - center).cwiseAbs().cwiseMax((b.hi - center).cwiseAbs()).norm();
    if (dmin >= r_out || dmax < r_in) continue;
    if (dmin >= r_in && dmax < r_out) {
      w[c] = 1.0;
      continue;
    }
    const auto& cell = mesh.cell(c);
    int inside = 0;
    for (const auto& bary : sub) {
      Vec x = Vec::Zero(dim);
      for (int k = 0; k <= dim; ++k) x += bary[k] * mesh.node(cell[k]);
      const double d = (x - center).norm();
      if (d >= r_in && d < r_out) ++inside;
    }
    w[c] = static_cast<double>(inside) / static_cast<double>(sub.size());
  }
  return w;
}

}  // namespace

Region Region::whole(const Mesh& mesh)
{
  Region r;
  r.kind_ = Kind::Whole;
  r.center_ = 0.5 * (mesh.box().lo + mesh.box().hi);
  r.weights_.assign(mesh.num_cells(), 1.0);
  return r;
}

Region Region::ball(const Mesh& mesh, const Vec& center, double radius)
{
  require_dim(center, mesh.dim(), "Region::ball");
  require(radius > 0.0, "Region::ball: radius must be positive");
  Region r;
  r.kind_ = Kind::Ball;
  r.center_ = center;
  r.r_out_ = radius;
  r.weights_ = shell_weights(mesh, center, 0.0, radius);
  return r;
}

Region Region::annulus(const Mesh& mesh, const Vec& center, double r_in, double r_out)
{
  require_dim(center, mesh.dim(), "Region::annulus");
  require(r_in >= 0.0 && r_out > r_in, "Region::annulus: need 0 <= r_in < r_out");
  Region r;
  r.kind_ = Kind::Annulus;
  r.center_ = center;
  r.r_in_ = r_in;
  r.r_out_ = r_out;
  r.weights_ = shell_weights(mesh, center, r_in, r_out);
  return r;
}

bool compactly_contained(const Mesh& mesh, const Vec& center, double radius)
{
  if (center.size() != mesh.dim() || !(radius > 0.0)) return false;
  for (int k = 0; k < mesh.dim(); ++k) {
    if (!(center(k) - radius > mesh.box().lo(k)) || !(center(k) + radius < mesh.box().hi(k))) return false;
  }
  return true;
}

void require_compact_ball(const Mesh& mesh, const Vec& center, double radius, const char* where)
{
  if (!compactly_contained(mesh, center, radius)) {
    throw std::invalid_argument(std::string(where) + ": ball of radius " + std::to_string(radius) +
                                " is not compactly contained in the mesh domain");
  }
}

CutoffFunction make_cutoff(const Mesh& mesh, const Vec& center, double t, double s)
{
  require(t >= 0.0 && t < s, "make_cutoff: need 0 <= t < s");
  require_compact_ball(mesh, center, s, "make_cutoff");
  CutoffFunction eta;
  eta.center = center;
  eta.t = t;
  eta.s = s;
  eta.values.location = Location::Node;
  eta.values.values.resize(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const double d = (mesh.node(i) - center).norm();
    eta.values.values[i] = std::clamp((s - d) / (s - t), 0.0, 1.0);
  }
  return eta;
}

}  // namespace plap
