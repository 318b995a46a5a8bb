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
#include "plap/problem.hpp"
#include "plap/regularized_operator.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <memory>
#include <vector>

namespace plap {

/// Serial is the reference scatter loop; OpenMP computes cell contributions
/// in parallel and gathers them per node (or per matrix entry) in increasing
/// cell order. Both add in the same order, so results are bit-identical for
/// any thread count.
enum class Backend { Serial, OpenMP };

struct QuadraturePoint {
  std::array<double, kMaxDim + 1> bary;
  double weight;  ///< fraction of the cell volume
};

/// Degree-2 simplex rule: 3 points in 2D, 4 points in 3D.
const std::vector<QuadraturePoint>& load_quadrature(int dim);

/// P1 assembly of the regularized energy, its gradient and Hessian over the
/// free (non-boundary) nodes of a mesh.
class Assembler {
public:
  explicit Assembler(std::shared_ptr<const Mesh> mesh, Backend backend = Backend::OpenMP);

  [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
  [[nodiscard]] const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  [[nodiscard]] Backend backend() const { return backend_; }
  void set_backend(Backend b) { backend_ = b; }

  [[nodiscard]] std::size_t num_free() const { return free_nodes_.size(); }
  /// Node index of each free unknown.
  [[nodiscard]] const std::vector<int>& free_nodes() const { return free_nodes_; }
  /// Unknown index of each node, -1 on the boundary.
  [[nodiscard]] const std::vector<int>& free_index() const { return free_index_; }

  /// sum over cells of (1/p)(eps^2 + H^2(grad v))^(p/2) |c|.
  [[nodiscard]] double gradient_energy(const RegularizedOperator& op, const std::vector<double>& v) const;

  /// Nodal vector of integral a_eps(grad v) . grad phi_i, for every node.
  [[nodiscard]] std::vector<double> stress_residual(const RegularizedOperator& op,
                                                    const std::vector<double>& v) const;

  /// Free-free stiffness matrix integral grad phi_i^T A_eps(grad v) grad phi_j.
  /// Cells with grad v = 0 at eps = 0 use the Jacobian at eps_floor instead.
  [[nodiscard]] const Eigen::SparseMatrix<double>& hessian(const RegularizedOperator& op,
                                                           const std::vector<double>& v,
                                                           double eps_floor = 1e-12) const;

  /// Nodal load vector integral f_eps phi_i, with f truncated at the
  /// quadrature points when eps > 0.
  [[nodiscard]] std::vector<double> load_vector(const ProblemSpec& spec, double eps) const;

private:
  template <class CellKernel>
  void gather_nodes(int width, const CellKernel& kernel, std::vector<double>& out) const;

  std::shared_ptr<const Mesh> mesh_;
  Backend backend_;
  std::vector<int> free_nodes_;
  std::vector<int> free_index_;
  // Sparse pattern over free unknowns, plus for each cell-local pair (a, b)
  // the position of its entry in the value array (or -1 if a or b is fixed).
  mutable Eigen::SparseMatrix<double> matrix_;
  std::vector<int> cell_entry_;
  // For each stored entry, the cell-local buffer slots contributing to it, in cell order.
  std::vector<std::size_t> entry_offsets_;
  std::vector<std::size_t> entry_slots_;
  mutable std::vector<double> cell_buffer_;
};

}  // namespace plap
