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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace plap {

struct Box {
  Vec lo;
  Vec hi;

  [[nodiscard]] int dim() const { return static_cast<int>(lo.size()); }
  [[nodiscard]] double volume() const { return (hi - lo).prod(); }
};

/**
 * Structured simplicial mesh of an axis-aligned box. Each grid cell is split
 * into n! simplices along its main diagonal (Kuhn triangulation), which is
 * conforming and translation invariant: 2 triangles per square in 2D, 6
 * tetrahedra per cube in 3D.
 */
class Mesh {
public:
  using Cell = std::array<int, kMaxDim + 1>;

  static Mesh structured(const Box& box, std::vector<int> cells_per_axis);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const Box& box() const { return box_; }
  [[nodiscard]] const std::vector<int>& cells_per_axis() const { return cells_per_axis_; }
  [[nodiscard]] std::size_t num_nodes() const { return boundary_.size(); }
  [[nodiscard]] std::size_t num_cells() const { return cells_.size(); }
  [[nodiscard]] int vertices_per_cell() const { return dim_ + 1; }

  /// Largest grid spacing over the axes.
  [[nodiscard]] double h() const { return h_; }

  [[nodiscard]] Vec node(std::size_t i) const
  {
    return Eigen::Map<const Eigen::VectorXd>(coords_.data() + i * dim_, dim_);
  }
  [[nodiscard]] const Cell& cell(std::size_t c) const { return cells_[c]; }
  [[nodiscard]] double volume(std::size_t c) const { return volumes_[c]; }
  [[nodiscard]] Vec centroid(std::size_t c) const
  {
    return Eigen::Map<const Eigen::VectorXd>(centroids_.data() + c * dim_, dim_);
  }
  /// Gradient of the barycentric basis function of local vertex k on cell c.
  [[nodiscard]] Vec basis_gradient(std::size_t c, int k) const
  {
    return Eigen::Map<const Eigen::VectorXd>(basis_grads_.data() + (c * (dim_ + 1) + k) * dim_, dim_);
  }
  [[nodiscard]] const double* basis_gradient_data(std::size_t c) const
  {
    return basis_grads_.data() + c * (dim_ + 1) * dim_;
  }
  [[nodiscard]] bool is_boundary(std::size_t i) const { return boundary_[i] != 0; }

  /// Cells incident to node i, in increasing cell order.
  struct Incidence {
    int cell;
    int local;
  };
  [[nodiscard]] std::span<const Incidence> node_cells(std::size_t i) const
  {
    return {incidence_.data() + incidence_offsets_[i], incidence_.data() + incidence_offsets_[i + 1]};
  }

  /// Axis-aligned bounding box of cell c.
  [[nodiscard]] Box cell_bounds(std::size_t c) const;

  /// Number of facets shared by exactly two cells and by exactly one cell.
  struct FacetCounts {
    std::size_t interior = 0;
    std::size_t boundary = 0;
    std::size_t other = 0;
  };
  [[nodiscard]] FacetCounts facet_counts() const;

private:
  int dim_ = 0;
  Box box_;
  std::vector<int> cells_per_axis_;
  double h_ = 0.0;
  std::vector<double> coords_;
  std::vector<Cell> cells_;
  std::vector<double> volumes_;
  std::vector<double> centroids_;
  std::vector<double> basis_grads_;
  std::vector<unsigned char> boundary_;
  std::vector<std::size_t> incidence_offsets_;
  std::vector<Incidence> incidence_;
};

enum class Location { Node, Cell };

/// Nodal (P1) or per-cell (P0) scalar values.
struct ScalarField {
  Location location = Location::Node;
  std::vector<double> values;
};

/// Vector values stored contiguously with stride `dim`.
struct VectorField {
  Location location = Location::Cell;
  int dim = 0;
  std::vector<double> values;

  [[nodiscard]] std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
  [[nodiscard]] Vec at(std::size_t i) const
  {
    return Eigen::Map<const Eigen::VectorXd>(values.data() + i * dim, dim);
  }
  void set(std::size_t i, const Vec& v)
  {
    for (int k = 0; k < dim; ++k) values[i * dim + k] = v(k);
  }
};

/// Row-major dim x dim matrices with a validity flag per entry location
/// (recovered quantities are only defined at interior nodes).
struct MatrixField {
  Location location = Location::Node;
  int dim = 0;
  std::vector<double> values;
  std::vector<unsigned char> valid;

  [[nodiscard]] std::size_t size() const { return valid.size(); }
  [[nodiscard]] Mat at(std::size_t i) const
  {
    Mat m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = values[(i * dim + r) * dim + c];
    return m;
  }
  void set(std::size_t i, const Mat& m)
  {
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) values[(i * dim + r) * dim + c] = m(r, c);
  }
};

/// A subset of the mesh domain described by per-cell membership fractions.
class Region {
public:
  enum class Kind { Ball, Annulus, Whole };

  static Region whole(const Mesh& mesh);
  static Region ball(const Mesh& mesh, const Vec& center, double radius);
  /// Points with r_in <= |x - center| < r_out.
  static Region annulus(const Mesh& mesh, const Vec& center, double r_in, double r_out);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const Vec& center() const { return center_; }
  [[nodiscard]] double r_in() const { return r_in_; }
  [[nodiscard]] double r_out() const { return r_out_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] double weight(std::size_t c) const { return weights_[c]; }
  [[nodiscard]] std::size_t num_cells() const { return weights_.size(); }

private:
  Kind kind_ = Kind::Whole;
  Vec center_;
  double r_in_ = 0.0;
  double r_out_ = 0.0;
  std::vector<double> weights_;
};

/// Barycentric subsample points used for region membership: 16 equal-area
/// sub-triangle centroids in 2D, a 35-point interior lattice in 3D.
const std::vector<std::array<double, kMaxDim + 1>>& cell_subsamples(int dim);

/// True when the closed ball lies inside the open mesh box.
bool compactly_contained(const Mesh& mesh, const Vec& center, double radius);

/// Throws std::invalid_argument unless compactly_contained().
void require_compact_ball(const Mesh& mesh, const Vec& center, double radius, const char* where);

struct CutoffFunction {
  Vec center;
  double t = 0.0;  ///< inner radius: eta == 1 on B_t
  double s = 0.0;  ///< outer radius: eta == 0 outside B_s
  ScalarField values;
};

/// Radial piecewise-linear cutoff eta(x) = clamp((s - |x - c|) / (s - t), 0, 1)
/// sampled at the nodes.
CutoffFunction make_cutoff(const Mesh& mesh, const Vec& center, double t, double s);

}  // namespace plap
