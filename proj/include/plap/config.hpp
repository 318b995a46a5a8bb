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

#include "plap/expression.hpp"
#include "plap/manufactured.hpp"
#include "plap/norms.hpp"
#include "plap/problem.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plap {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text; `#` starts a comment, lists are comma separated.
///
///   name               instance label used in every CSV (default: "run")
///   domain.lo/hi       box corners (default: -1,-1 and 1,1)
///   mesh.resolutions   cells per axis, strictly increasing (default: 32)
///   norm.family        euclidean | weighted | power
///   norm.weights       weights of the weighted family, and of the second
///                      component of the power family
///   norm.a, norm.b,    power family (a |xi|^q + b H_w(xi)^q)^(1/q)
///   norm.p_comb
///   solve.p            exponent; a list runs one instance per value
///   solve.grad_tol, solve.max_iter
///   source             torsion | zero | sine | an expression in x, y, z
///   boundary           torsion | zero | an expression
///   torsion.center, torsion.radius
///   eps.schedule       explicit schedule; default 0.5^k down to max(1e-4, h)
///   regions.center, regions.R
///   verify.checks      estimate ids, or `all`
///   critical.deltas    decreasing delta ladder (default derived from the solution)
///   hessian.deltas     increasing thresholds for the weighted Hessian
///   holder.beta, holder.pairs
///   campanato.lambda
///   seed, out
struct RunConfig {
  std::string name = "run";
  Box domain;
  std::vector<int> resolutions{32};
  std::string norm_family = "euclidean";
  std::vector<double> norm_weights;
  double norm_a = 1.0;
  double norm_b = 1.0;
  double norm_p_comb = 2.0;
  std::vector<double> p{2.0};
  double grad_tol = 1e-10;
  int max_iter = 200;
  std::string source = "torsion";
  std::string boundary = "zero";
  Vec torsion_center;
  double torsion_radius = 1.0;
  std::vector<double> eps_schedule;
  Vec region_center;
  std::vector<double> region_radii;
  std::vector<std::string> checks;
  std::vector<double> critical_deltas;
  std::vector<double> hessian_deltas;
  double holder_beta = 0.5;
  std::size_t holder_pairs = 20000;
  std::optional<double> campanato_lambda;
  std::uint64_t seed = 0;
  std::string out = "out";

  [[nodiscard]] int dim() const { return domain.dim(); }

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  /// Resolved configuration, one `key = value` line per key, in a fixed order.
  void write(std::ostream& os) const;
};

/// Throws ConfigError with the offending line number on malformed input.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Throws ConfigError for unknown families, with an explanation for l1/max-type requests.
AnisotropicNorm build_norm(const RunConfig& cfg);

/// The manufactured torsion case the config refers to, when source and
/// boundary both select it and the norm is Euclidean.
std::optional<ManufacturedCase> torsion_case(const RunConfig& cfg, double p);

/// Problem for exponent p on the given mesh.
ProblemSpec build_problem(const RunConfig& cfg, double p, std::shared_ptr<const Mesh> mesh);

/// Source as a point function (also used by the Morrey check).
PointFunction build_source(const RunConfig& cfg);

}  // namespace plap
