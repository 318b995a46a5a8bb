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

#include "plap/verify.hpp"

#include "plap/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace plap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScalarField cell_field(const Mesh& mesh, const std::function<double(std::size_t)>& fn)
{
  ScalarField out{Location::Cell, std::vector<double>(mesh.num_cells())};
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) out.values[c] = fn(c);
  return out;
}

/// Cell mean of g(f(x)) by the degree-2 rule, with f optionally truncated at eps.
ScalarField source_cells(const ProblemSpec& spec, double eps, const std::function<double(double)>& g)
{
  const Mesh& m = *spec.mesh;
  const auto& quad = load_quadrature(m.dim());
  return cell_field(m, [&](std::size_t c) {
    const auto& cell = m.cell(c);
    double s = 0.0;
    for (const auto& q : quad) {
      Vec x = Vec::Zero(m.dim());
      for (int k = 0; k < m.vertices_per_cell(); ++k) x += q.bary[k] * m.node(cell[k]);
      double f = spec.source_at(c, q.bary, x);
      if (eps > 0.0) f = truncate_source(f, eps);
      s += q.weight * g(f);
    }
    return s;
  });
}

/// Vertex average of nodal values; cells touching an invalid node get 0.
ScalarField nodal_to_cells(const Mesh& mesh, const std::vector<double>& nodal, const std::vector<unsigned char>& valid)
{
  return cell_field(mesh, [&](std::size_t c) {
    const auto& cell = mesh.cell(c);
    double s = 0.0;
    for (int k = 0; k < mesh.vertices_per_cell(); ++k) {
      if (!valid[cell[k]]) return 0.0;
      s += nodal[cell[k]];
    }
    return s / mesh.vertices_per_cell();
  });
}

std::vector<double> frobenius_squared(const MatrixField& m)
{
  std::vector<double> out(m.size(), 0.0);
  const std::size_t block = static_cast<std::size_t>(m.dim) * m.dim;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < block; ++k) s += m.values[i * block + k] * m.values[i * block + k];
    out[i] = s;
  }
  return out;
}

VectorField stress_cells(const Mesh& mesh, const RegularizedOperator& op, const VectorField& grads)
{
  VectorField out{Location::Cell, mesh.dim(), std::vector<double>(grads.values.size())};
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) out.set(c, op.stress(grads.at(c)));
  return out;
}

ScalarField magnitude(const VectorField& v, double power)
{
  ScalarField out{v.location, std::vector<double>(v.size())};
  for (std::size_t i = 0; i < v.size(); ++i) out.values[i] = std::pow(v.at(i).norm(), power);
  return out;
}

ScalarField nodal(const std::vector<double>& u) { return {Location::Node, u}; }

double final_eps(const SolveReport& rep) { return rep.eps; }

}  // namespace

double EstimateReport::rhs_total() const
{
  double s = 0.0;
  for (const auto& t : rhs) s += t.value;
  return s;
}

void EstimateReport::finish()
{
  const double total = rhs_total();
  if (total > 0.0) c_emp = lhs / total;
  else c_emp = lhs == 0.0 ? 0.0 : kInf;
}

const std::vector<EstimateInfo>& estimate_registry()
{
  static const std::vector<EstimateInfo> reg = {
      {"energy_bound", "a priori bound on int (eps^2+H^2(grad u_eps))^(p/2) with explicit Sobolev constants (hard)"},
      {"residual", "energy gradient norm at every continuation stage is below tolerance (hard)"},
      {"caccioppoli", "weighted Hessian under a cutoff vs cutoff-gradient and source terms"},
      {"stress_h1", "L2 norm of grad a(grad u) on B_R/2 vs annulus L1 stress and L2 source"},
      {"stress_l2", "L2 norm of a(grad u) on B_R vs annulus L1 stress and L2 source"},
      {"stress_l1", "annulus L1 norm of a(grad u) vs the L^(p-1) norm of grad u"},
      {"stress_l2_eps", "int |a_eps|^2 on B_R vs squared annulus L1 stress and int f_eps^2 (regularized)"},
      {"stress_h1_eps", "int ||grad a_eps||^2 on B_R/2 vs squared annulus L1 stress and int f_eps^2 (regularized)"},
      {"hessian_h2", "unweighted int ||D^2 u||^2 on B_R/2 for p <= 2"},
      {"hessian_weighted", "int [H^2(grad u)]^(p-2) ||D^2 u||^2 off the critical set; non-increasing in delta (hard)"},
      {"gradient_holder", "sampled Holder quotient of grad u on B_R"},
      {"critical_set", "measure of {|grad u| < delta} and int of |f| over it; both non-increasing along a decreasing delta ladder (hard)"},
      {"campanato", "C^{0,alpha} norm of F = grad w (-div F = f) vs the Morrey norm of f; divergence identity residual <= 1e-8 (hard)"},
      {"convergence", "W^{1,p} distance and monotonicity gap to the reference along the eps schedule"},
  };
  return reg;
}

InstanceInfo describe_instance(const ProblemSpec& spec, const SolveReport& rep, double R)
{
  return {spec.name, spec.p, to_string(spec.norm.family()), spec.mesh->h(), rep.eps, R};
}

EstimateReport check_energy_bound(const ProblemSpec& spec, const SolveReport& rep, const std::vector<double>& u_ref)
{
  const Mesh& m = *spec.mesh;
  require(u_ref.size() == m.num_nodes(), "check_energy_bound: missing reference solution");
  const double p = spec.p;
  const double eps = final_eps(rep);
  const Region all = Region::whole(m);
  const VectorField g_eps = gradient(m, nodal(rep.u));
  const VectorField g_ref = gradient(m, nodal(u_ref));
  const double lhs = integrate(m, cell_field(m, [&](std::size_t c) {
                                 const double h = spec.norm.eval(g_eps.at(c));
                                 return std::pow(eps * eps + h * h, 0.5 * p);
                               }),
                               all);
  const double hp_ref =
      integrate(m, cell_field(m, [&](std::size_t c) { return std::pow(spec.norm.eval(g_ref.at(c)), p); }), all);
  const double measure = m.box().volume();
  const EnergyBoundConstants k = energy_bound_constants(p, m.dim(), spec.norm.alpha(), measure);
  const double fq = std::pow(integrate(m, source_cells(spec, 0.0, [&](double f) { return std::pow(std::abs(f), k.q); }),
                                       all),
                             1.0 / k.q);

  EstimateReport r;
  r.id = "energy_bound";
  r.instance = describe_instance(spec, rep);
  r.lhs = lhs;
  r.rhs = {{"gradient", (std::pow(2.0, p) + 1.0) * hp_ref},
           {"source", k.c_under * std::pow(fq, k.p_prime)},
           {"regularization", std::pow(2.0, p) * std::pow(eps, p) * measure}};
  r.finish();
  r.hard = true;
  r.passed = std::isfinite(lhs) && lhs <= r.rhs_total();
  return r;
}

EstimateReport check_residual(const ProblemSpec& spec, const SolveReport& rep)
{
  EstimateReport r;
  r.id = "residual";
  r.instance = describe_instance(spec, rep);
  // Recompute rather than trusting the report, so a corrupted field is caught.
  const Solver solver(spec, Backend::Serial);
  double gn = 0.0;
  for (double g : solver.energy_gradient(rep.u, rep.eps)) gn += g * g;
  r.lhs = std::sqrt(gn);
  r.rhs = {{"tolerance", spec.tol.grad_tol}};
  r.finish();
  r.hard = true;
  r.passed = r.lhs <= spec.tol.grad_tol;
  return r;
}

EstimateReport check_caccioppoli(const ProblemSpec& spec, const SolveReport& rep, const CutoffFunction& eta)
{
  const Mesh& m = *spec.mesh;
  require(rep.eps > 0.0, "check_caccioppoli: the inequality is stated for eps > 0");
  require_compact_ball(m, eta.center, eta.s, "check_caccioppoli");
  const double p = spec.p;
  const double e2 = rep.eps * rep.eps;
  const Region all = Region::whole(m);
  const VectorField g = gradient(m, nodal(rep.u));
  const MatrixField hess = hessian(m, nodal(rep.u));
  const ScalarField hess2 = nodal_to_cells(m, frobenius_squared(hess), hess.valid);
  const VectorField deta = gradient(m, eta.values);
  std::vector<double> eta2(eta.values.values.size());
  for (std::size_t i = 0; i < eta2.size(); ++i) eta2[i] = eta.values.values[i] * eta.values.values[i];
  const ScalarField eta2c = to_cells(m, nodal(eta2));

  auto weight = [&](std::size_t c) {
    const double h = spec.norm.eval(g.at(c));
    return std::pow(e2 + h * h, p - 2.0);
  };
  const double lhs =
      integrate(m, cell_field(m, [&](std::size_t c) { return eta2c.values[c] * weight(c) * hess2.values[c]; }), all);
  const double t1 = integrate(m, cell_field(m, [&](std::size_t c) {
                                const double h = spec.norm.eval(g.at(c));
                                return weight(c) * h * h * deta.at(c).squaredNorm();
                              }),
                              all);
  const ScalarField f2 = source_cells(spec, rep.eps, [](double f) { return f * f; });
  const double t2 = integrate(m, cell_field(m, [&](std::size_t c) { return eta2c.values[c] * f2.values[c]; }), all);

  EstimateReport r;
  r.id = "caccioppoli";
  r.instance = describe_instance(spec, rep, eta.t);
  r.lhs = lhs;
  r.rhs = {{"cutoff_gradient", t1}, {"source", t2}};
  r.finish();
  r.passed = std::isfinite(r.c_emp);
  return r;
}

std::vector<EstimateReport> check_stress_estimates(const ProblemSpec& spec, const SolveReport& rep, double R,
                                                   const Vec& center)
{
  const Mesh& m = *spec.mesh;
  require(R > 0.0, "check_stress_estimates: R must be positive");
  require_compact_ball(m, center, 2.0 * R, "check_stress_estimates");
  const int n = m.dim();
  const double p = spec.p;
  const Region half = Region::ball(m, center, 0.5 * R);
  const Region inner = Region::ball(m, center, R);
  const Region outer = Region::ball(m, center, 2.0 * R);
  const Region ann = Region::annulus(m, center, R, 2.0 * R);
  const VectorField g = gradient(m, nodal(rep.u));

  const RegularizedOperator op0(spec.norm, p, 0.0);
  const RegularizedOperator ope(spec.norm, p, rep.eps);
  const VectorField a0 = stress_cells(m, op0, g);
  const VectorField ae = stress_cells(m, ope, g);
  const MatrixField da0 = recover_gradient(m, a0);
  const MatrixField dae = recover_gradient(m, ae);
  const ScalarField da0_sq = nodal_to_cells(m, frobenius_squared(da0), da0.valid);
  const ScalarField dae_sq = nodal_to_cells(m, frobenius_squared(dae), dae.valid);

  const double a0_l1_ann = integrate(m, magnitude(a0, 1.0), ann);
  const double ae_l1_ann = integrate(m, magnitude(ae, 1.0), ann);
  const double f_l2 = std::sqrt(integrate(m, source_cells(spec, 0.0, [](double f) { return f * f; }), outer));
  const double fe_sq = integrate(m, source_cells(spec, rep.eps, [](double f) { return f * f; }), outer);
  const InstanceInfo info = describe_instance(spec, rep, R);

  std::vector<EstimateReport> out(5);
  out[0].id = "stress_h1";
  out[0].lhs = std::sqrt(integrate(m, da0_sq, half));
  out[0].rhs = {{"annulus_stress", std::pow(R, -0.5 * n - 1.0) * a0_l1_ann}, {"source", f_l2}};

  out[1].id = "stress_l2";
  out[1].lhs = std::sqrt(integrate(m, magnitude(a0, 2.0), inner));
  out[1].rhs = {{"annulus_stress", std::pow(R, -0.5 * n) * a0_l1_ann}, {"source", R * f_l2}};

  out[2].id = "stress_l1";
  out[2].lhs = a0_l1_ann;
  out[2].rhs = {{"gradient", integrate(m, magnitude(g, p - 1.0), ann)}};

  out[3].id = "stress_l2_eps";
  out[3].lhs = integrate(m, magnitude(ae, 2.0), inner);
  out[3].rhs = {{"annulus_stress", std::pow(R, -n) * ae_l1_ann * ae_l1_ann}, {"source", R * R * fe_sq}};

  out[4].id = "stress_h1_eps";
  out[4].lhs = integrate(m, dae_sq, half);
  out[4].rhs = {{"annulus_stress", std::pow(R, -n - 2.0) * ae_l1_ann * ae_l1_ann}, {"source", fe_sq}};

  for (auto& r : out) {
    r.instance = info;
    r.finish();
    r.passed = std::isfinite(r.c_emp);
  }
  return out;
}

EstimateReport check_hessian_unweighted(const ProblemSpec& spec, const SolveReport& rep, double R, const Vec& center)
{
  require(spec.p <= 2.0, "check_hessian_unweighted: the unweighted H^2 bound needs p <= 2");
  const Mesh& m = *spec.mesh;
  require_compact_ball(m, center, 2.0 * R, "check_hessian_unweighted");
  const int n = m.dim();
  const MatrixField hess = hessian(m, nodal(rep.u));
  const VectorField g = gradient(m, nodal(rep.u));
  const VectorField a0 = stress_cells(m, RegularizedOperator(spec.norm, spec.p, 0.0), g);
  const double a_l1 = integrate(m, magnitude(a0, 1.0), Region::annulus(m, center, R, 2.0 * R));
  const double f_sq = integrate(m, source_cells(spec, 0.0, [](double f) { return f * f; }),
                                Region::ball(m, center, 2.0 * R));

  EstimateReport r;
  r.id = "hessian_h2";
  r.instance = describe_instance(spec, rep, R);
  r.lhs = integrate(m, nodal_to_cells(m, frobenius_squared(hess), hess.valid), Region::ball(m, center, 0.5 * R));
  r.rhs = {{"annulus_stress", std::pow(R, -n - 2.0) * a_l1 * a_l1}, {"source", f_sq}};
  r.finish();
  r.passed = std::isfinite(r.c_emp);
  return r;
}

EstimateReport check_hessian_weighted(const ProblemSpec& spec, const SolveReport& rep, double R, const Vec& center,
                                      std::span<const double> deltas)
{
  require(!deltas.empty(), "check_hessian_weighted: empty delta ladder");
  for (std::size_t k = 1; k < deltas.size(); ++k)
    require(deltas[k] > deltas[k - 1], "check_hessian_weighted: deltas must increase");
  const Mesh& m = *spec.mesh;
  require_compact_ball(m, center, 2.0 * R, "check_hessian_weighted");
  const double p = spec.p;
  const MatrixField hess = hessian(m, nodal(rep.u));
  const ScalarField hess2 = nodal_to_cells(m, frobenius_squared(hess), hess.valid);
  const VectorField g = gradient(m, nodal(rep.u));
  const Region half = Region::ball(m, center, 0.5 * R);

  EstimateReport r;
  r.id = "hessian_weighted";
  r.instance = describe_instance(spec, rep, R);
  for (double delta : deltas) {
    const double v = integrate(m, cell_field(m, [&](std::size_t c) {
                                 const Vec gc = g.at(c);
                                 if (gc.norm() <= delta) return 0.0;
                                 const double h = spec.norm.eval(gc);
                                 return std::pow(h * h, p - 2.0) * hess2.values[c];
                               }),
                               half);
    r.history.push_back(v);
  }
  r.lhs = r.history.front();
  r.c_emp = r.lhs;
  r.hard = true;
  r.passed = true;
  for (std::size_t k = 1; k < r.history.size(); ++k)
    if (r.history[k] > r.history[k - 1]) r.passed = false;
  r.passed = r.passed && std::isfinite(r.lhs);
  return r;
}

EstimateReport check_gradient_holder(const ProblemSpec& spec, const SolveReport& rep, double R, const Vec& center,
                                     double beta, std::size_t pair_samples, std::uint64_t seed)
{
  const Mesh& m = *spec.mesh;
  require_compact_ball(m, center, R, "check_gradient_holder");
  const VectorField g = gradient(m, nodal(rep.u));
  std::vector<Vec> pts;
  std::vector<Vec> vals;
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    if ((m.centroid(c) - center).norm() < R) {
      pts.push_back(m.centroid(c));
      vals.push_back(g.at(c));
    }
  }
  const HolderEstimate est = holder_seminorm(pts, vals, beta, pair_samples, seed);
  EstimateReport r;
  r.id = "gradient_holder";
  r.instance = describe_instance(spec, rep, R);
  r.lhs = est.seminorm;
  r.rhs = {{"sup", est.sup}};
  r.finish();
  r.passed = std::isfinite(est.seminorm);
  r.note = std::to_string(est.pairs) + " pairs";
  return r;
}

CriticalSetTable check_critical_set(const ProblemSpec& spec, const SolveReport& rep,
                                    std::span<const double> delta_ladder, const ManufacturedCase* exact)
{
  require(!delta_ladder.empty(), "check_critical_set: empty delta ladder");
  const Mesh& m = *spec.mesh;
  const Region all = Region::whole(m);
  const VectorField g = gradient(m, nodal(rep.u));
  const ScalarField abs_f = source_cells(spec, 0.0, [](double f) { return std::abs(f); });

  CriticalSetTable t;
  t.instance = describe_instance(spec, rep);
  t.applicable = integrate(m, abs_f, all) > 0.0;
  for (double delta : delta_ladder) {
    CriticalSetRow row;
    row.delta = delta;
    const ScalarField inside = cell_field(m, [&](std::size_t c) { return g.at(c).norm() < delta ? 1.0 : 0.0; });
    row.measure = integrate(m, inside, all);
    row.f_integral = integrate(m, inside, all, &abs_f);
    if (exact != nullptr) row.expected = exact->critical_measure(delta);
    t.rows.push_back(row);
  }
  if (!t.applicable) return t;
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    const CriticalSetRow& a = t.rows[k - 1];
    const CriticalSetRow& b = t.rows[k];
    if (!(b.measure <= a.measure) || !(b.f_integral <= a.f_integral)) t.monotone = false;
    if (!(b.measure < a.measure) || !(b.f_integral < a.f_integral)) t.strictly_decreasing = false;
  }
  // Least-squares slope of log m against log delta over rows with nonzero measure.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& row : t.rows) {
    if (row.measure <= 0.0) continue;
    const double x = std::log(row.delta);
    const double y = std::log(row.measure);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  t.fitted_exponent = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
  if (exact != nullptr) {
    t.expected_exponent = m.dim() * (spec.p - 1.0);
    t.exponent_ok = cnt >= 2 && std::abs(t.fitted_exponent - t.expected_exponent) <= 0.3 * t.expected_exponent;
  }
  return t;
}

EstimateReport check_campanato_lemma(std::shared_ptr<const Mesh> mesh, const PointFunction& f, double lambda,
                                     const CampanatoOptions& options)
{
  const Mesh& m = *mesh;
  const int n = m.dim();
  require(lambda > n - 2 && lambda < n, "check_campanato_lemma: lambda must lie in (n-2, n)");
  const double alpha = 0.5 * (lambda - n + 2.0);

  const ScalarField w = poisson_solve(mesh, f);
  const double residual = galerkin_residual(mesh, w, f);
  const VectorField F = gradient(m, w);

  const Vec lo = m.box().lo;
  const Vec hi = m.box().hi;
  const double margin = options.interior_margin * (hi - lo).minCoeff();
  std::vector<Vec> pts;
  std::vector<Vec> vals;
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const Vec x = m.centroid(c);
    if (((x - lo).minCoeff() >= margin) && ((hi - x).minCoeff() >= margin)) {
      pts.push_back(x);
      vals.push_back(F.at(c));
    }
  }
  const HolderEstimate holder = holder_seminorm(pts, vals, alpha, options.pair_samples, options.seed);

  // Morrey samples: a centers grid over the box interior and a dyadic radius
  // ladder from a quarter of the admissible radius up to it.
  const std::size_t k = std::max<std::size_t>(options.centers_per_axis, 1);
  std::vector<Vec> centers;
  const std::size_t total = n == 2 ? k * k : k * k * k;
  for (std::size_t idx = 0; idx < total; ++idx) {
    Vec c(n);
    std::size_t rem = idx;
    for (int d = 0; d < n; ++d) {
      const std::size_t j = rem % k;
      rem /= k;
      c(d) = lo(d) + (hi(d) - lo(d)) * (j + 1.0) / (k + 1.0);
    }
    centers.push_back(c);
  }
  double r_max = kInf;
  for (const Vec& c : centers)
    r_max = std::min(r_max, std::min((c - lo).minCoeff(), (hi - c).minCoeff()));
  r_max *= 0.999;
  std::vector<double> radii;
  for (std::size_t j = 0; j < options.radius_levels; ++j)
    radii.push_back(r_max * std::pow(0.5, static_cast<double>(options.radius_levels - 1 - j)));
  const MorreyEstimate morrey = morrey_norm(m, {Location::Node, sample_nodes(m, f)}, lambda, centers, radii);

  EstimateReport r;
  r.id = "campanato";
  r.instance = {"campanato", 2.0, "Euclidean", m.h(), 0.0, 0.0};
  r.lhs = holder.norm();
  r.rhs = {{"morrey", morrey.value}};
  r.finish();
  r.history = {residual};
  r.hard = true;
  r.passed = residual <= 1e-8 && std::isfinite(r.c_emp);
  r.note = std::to_string(holder.pairs) + " pairs, " + std::to_string(morrey.samples) + " balls, alpha " +
           format_number(alpha);
  return r;
}

ConvergenceTable check_convergence(const ProblemSpec& spec, std::span<const SolveReport> stages,
                                   const std::vector<double>& u_ref)
{
  require(stages.size() >= 3, "check_convergence: need at least three schedule stages");
  const Mesh& m = *spec.mesh;
  require(u_ref.size() == m.num_nodes(), "check_convergence: missing reference solution");
  const double p = spec.p;
  const Region all = Region::whole(m);
  const VectorField g_ref = gradient(m, nodal(u_ref));

  ConvergenceTable t;
  t.instance = describe_instance(spec, stages.back());
  std::vector<double> w1p;
  std::vector<double> gap;
  for (const SolveReport& s : stages) {
    const VectorField g = gradient(m, nodal(s.u));
    ConvergenceRow row;
    row.eps = s.eps;
    row.w1p = w1p_distance(m, s.u, u_ref, p);
    row.gap = integrate(m, cell_field(m, [&](std::size_t c) {
                          const Vec a = g_ref.at(c);
                          const Vec b = g.at(c);
                          const double d = (a - b).norm();
                          if (p >= 2.0) return std::pow(d, p);
                          return std::pow(1.0 + a.norm() + b.norm(), p - 2.0) * d * d;
                        }),
                        all);
    t.rows.push_back(row);
    w1p.push_back(row.w1p);
    gap.push_back(row.gap);
  }
  t.w1p_decreasing = decreasing_with_slack(w1p, 0.1);
  t.gap_decreasing = decreasing_with_slack(gap, 0.1);
  return t;
}

double variation(std::span<const double> values)
{
  if (values.empty()) return 0.0;
  double lo = kInf;
  double hi = 0.0;
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) return kInf;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi / lo - 1.0;
}

bool uniformly_bounded(std::span<const double> values, std::size_t tail, double tolerance)
{
  for (double v : values)
    if (!std::isfinite(v)) return false;
  if (values.size() < tail) return true;
  return variation(values.subspan(values.size() - tail)) < tolerance;
}

bool decreasing_with_slack(std::span<const double> values, double slack)
{
  for (std::size_t k = 1; k < values.size(); ++k)
    if (!(values[k] <= (1.0 + slack) * values[k - 1])) return false;
  return true;
}

std::string format_number(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

void write_reports_csv(std::ostream& out, std::span<const EstimateReport> reports)
{
  out << "instance,estimate_id,h,eps,R,lhs";
  if (!reports.empty())
    for (const auto& t : reports.front().rhs) out << ",rhs_term:" << t.name;
  out << ",c_emp\n";
  for (const auto& r : reports) {
    out << r.instance.name << ',' << r.id << ',' << format_number(r.instance.h) << ','
        << format_number(r.instance.eps) << ',' << format_number(r.instance.R) << ',' << format_number(r.lhs);
    for (const auto& t : r.rhs) out << ',' << format_number(t.value);
    out << ',' << format_number(r.c_emp) << '\n';
  }
}

void write_critical_set_csv(std::ostream& out, std::span<const CriticalSetTable> tables)
{
  out << "instance,estimate_id,h,eps,p,delta,measure,f_integral,expected_measure,fitted_exponent,expected_exponent\n";
  for (const auto& t : tables) {
    for (const auto& row : t.rows) {
      out << t.instance.name << ",critical_set," << format_number(t.instance.h) << ',' << format_number(t.instance.eps)
          << ',' << format_number(t.instance.p) << ',' << format_number(row.delta) << ','
          << format_number(row.measure) << ',' << format_number(row.f_integral) << ','
          << format_number(row.expected) << ',' << format_number(t.fitted_exponent) << ','
          << format_number(t.expected_exponent) << '\n';
    }
  }
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceTable> tables)
{
  out << "instance,estimate_id,h,p,eps,w1p_distance,gap_integral\n";
  for (const auto& t : tables) {
    for (const auto& row : t.rows) {
      out << t.instance.name << ",convergence," << format_number(t.instance.h) << ','
          << format_number(t.instance.p) << ',' << format_number(row.eps) << ',' << format_number(row.w1p) << ','
          << format_number(row.gap) << '\n';
    }
  }
}

}  // namespace plap
