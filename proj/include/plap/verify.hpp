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

#include "plap/manufactured.hpp"
#include "plap/measures.hpp"
#include "plap/solver.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace plap {

struct InstanceInfo {
  std::string name;
  double p = 0.0;
  std::string family;
  double h = 0.0;
  double eps = 0.0;
  double R = 0.0;
};

struct RhsTerm {
  std::string name;
  double value = 0.0;
};

/// Both sides of one inequality on one discrete instance. c_emp is
/// lhs / (sum of rhs terms): 0 when both vanish, +inf when only the rhs does.
struct EstimateReport {
  std::string id;
  InstanceInfo instance;
  double lhs = 0.0;
  std::vector<RhsTerm> rhs;
  double c_emp = 0.0;
  std::vector<double> history;  ///< c_emp over a refinement or schedule study, when one was run
  bool hard = false;            ///< a failure must fail the whole run
  bool passed = true;
  std::string note;

  [[nodiscard]] double rhs_total() const;
  void finish();  ///< computes c_emp from lhs and rhs
};

struct EstimateInfo {
  std::string id;
  std::string description;
};

/// Registered estimate ids with a one-line statement of what each bounds.
const std::vector<EstimateInfo>& estimate_registry();

InstanceInfo describe_instance(const ProblemSpec& spec, const SolveReport& rep, double R = 0.0);

/// Hard check of the a priori energy bound with fully explicit constants:
///   LHS = int (eps^2 + H^2(grad u_eps))^(p/2)
///   RHS = (2^p + 1) int H^p(grad u) + C_under ||f||_{L^q}^(p') + 2^p eps^p |Omega'|
/// where u is the reference field (same mesh and boundary data).
EstimateReport check_energy_bound(const ProblemSpec& spec, const SolveReport& rep, const std::vector<double>& u_ref);

/// Hard check that the stage met its gradient tolerance.
EstimateReport check_residual(const ProblemSpec& spec, const SolveReport& rep);

/// Weighted Hessian against the cutoff:
///   int eta^2 [eps^2+H^2]^(p-2) ||D^2 u||^2  vs  int [eps^2+H^2]^(p-2) H^2 |grad eta|^2,  int eta^2 f_eps^2
EstimateReport check_caccioppoli(const ProblemSpec& spec, const SolveReport& rep, const CutoffFunction& eta);

/// Five stress estimates on the balls B_{R/2}, B_R, B_{2R} and the annulus B_{2R} \ B_R:
///   stress_h1       ||grad a||_{L2(B_R/2)}       vs R^(-n/2-1) ||a||_{L1(ann)}, ||f||_{L2(B_2R)}
///   stress_l2       ||a||_{L2(B_R)}              vs R^(-n/2) ||a||_{L1(ann)},   R ||f||_{L2(B_2R)}
///   stress_l1       ||a||_{L1(ann)}              vs ||grad u||_{L^(p-1)(ann)}^(p-1)
///   stress_l2_eps   int_{B_R} |a_eps|^2          vs R^-n (int_ann |a_eps|)^2,   R^2 int_{B_2R} f_eps^2
///   stress_h1_eps   int_{B_R/2} ||grad a_eps||^2 vs R^(-n-2) (int_ann |a_eps|)^2, int_{B_2R} f_eps^2
/// The first three use the unregularized stress and f, the last two a_eps and f_eps.
std::vector<EstimateReport> check_stress_estimates(const ProblemSpec& spec, const SolveReport& rep, double R,
                                                   const Vec& center);

/// int_{B_R/2} ||D^2 u||^2 vs R^(-n-2) ||a||_{L1(ann)}^2, ||f||_{L2(B_2R)}^2. Requires p <= 2.
EstimateReport check_hessian_unweighted(const ProblemSpec& spec, const SolveReport& rep, double R,
                                        const Vec& center);

/// int over B_R/2 minus {|grad u| <= delta} of [H^2(grad u)]^(p-2) ||D^2 u||^2, one value per delta.
/// The report's lhs is the value at the smallest delta; history holds all of them in ladder order.
/// Hard check: the values never increase as delta grows.
EstimateReport check_hessian_weighted(const ProblemSpec& spec, const SolveReport& rep, double R, const Vec& center,
                                      std::span<const double> deltas);

/// Sampled Holder quotient of the cell gradient over centroids in B_R.
EstimateReport check_gradient_holder(const ProblemSpec& spec, const SolveReport& rep, double R, const Vec& center,
                                     double beta, std::size_t pair_samples, std::uint64_t seed);

struct CriticalSetRow {
  double delta = 0.0;
  double measure = 0.0;     ///< |{|grad u| < delta}|
  double f_integral = 0.0;  ///< integral of |f| over that set
  double expected = 0.0;    ///< closed-form measure when a manufactured case is given, else 0
};

struct CriticalSetTable {
  InstanceInfo instance;
  std::vector<CriticalSetRow> rows;  ///< in ladder order (decreasing delta)
  bool applicable = true;            ///< false when f vanishes identically
  bool monotone = true;              ///< measure and f_integral both non-increasing along the ladder
  bool strictly_decreasing = true;   ///< both strictly decreasing
  double fitted_exponent = 0.0;      ///< least-squares slope of log measure against log delta
  double expected_exponent = 0.0;    ///< n(p-1) for the torsion case
  bool exponent_ok = true;           ///< fitted within 30% of expected (when expected is set)
};

CriticalSetTable check_critical_set(const ProblemSpec& spec, const SolveReport& rep,
                                    std::span<const double> delta_ladder,
                                    const ManufacturedCase* exact = nullptr);

struct CampanatoOptions {
  double interior_margin = 0.25;  ///< U' = points at distance >= margin * (shortest side) from the boundary
  std::size_t centers_per_axis = 5;
  std::size_t radius_levels = 5;
  std::size_t pair_samples = 200000;
  std::uint64_t seed = 0;
};

/// Builds F = grad w with -Laplace w = f (zero Dirichlet data), checks the
/// discrete divergence identity, and compares the sampled C^{0,alpha}(U') norm
/// of F with the sampled Morrey norm of f, alpha = (lambda - n + 2)/2.
/// rhs holds the Morrey norm; the Galerkin residual is stored in `history[0]`.
EstimateReport check_campanato_lemma(std::shared_ptr<const Mesh> mesh, const PointFunction& f, double lambda,
                                     const CampanatoOptions& options = {});

struct ConvergenceRow {
  double eps = 0.0;
  double w1p = 0.0;  ///< ||u_eps - u_ref||_{W^{1,p}}
  double gap = 0.0;  ///< integral of G_eps(grad u_ref, grad u_eps) with gamma_0 = 1
};

struct ConvergenceTable {
  InstanceInfo instance;
  std::vector<ConvergenceRow> rows;
  bool w1p_decreasing = true;  ///< each value at most 1.1x the previous
  bool gap_decreasing = true;
};

/// Requires at least three stages.
ConvergenceTable check_convergence(const ProblemSpec& spec, std::span<const SolveReport> stages,
                                   const std::vector<double>& u_ref);

/// max/min - 1 over positive finite values; +inf if any value is not positive and finite.
double variation(std::span<const double> values);
/// All finite, and the last `tail` values (smallest eps) vary by less than `tolerance`.
bool uniformly_bounded(std::span<const double> values, std::size_t tail = 3, double tolerance = 0.25);
/// values[k+1] <= (1 + slack) * values[k] for all k.
bool decreasing_with_slack(std::span<const double> values, double slack);

/// One CSV for a list of reports sharing the same estimate id (and rhs term names).
void write_reports_csv(std::ostream& out, std::span<const EstimateReport> reports);
void write_critical_set_csv(std::ostream& out, std::span<const CriticalSetTable> tables);
void write_convergence_csv(std::ostream& out, std::span<const ConvergenceTable> tables);

/// Formats a double the same way in every CSV.
std::string format_number(double v);

}  // namespace plap
