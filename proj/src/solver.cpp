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

#include "plap/solver.hpp"

#include "plap/measures.hpp"

#include <Eigen/SparseCholesky>

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace plap {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 40;

}  // namespace

Solver::Solver(ProblemSpec spec, Backend backend) : spec_(std::move(spec)), assembler_(spec_.mesh, backend)
{
  spec_.validate();
}

std::vector<double> Solver::initial_guess() const
{
  const Mesh& m = *spec_.mesh;
  std::vector<double> v(m.num_nodes(), 0.0);
  for (std::size_t i = 0; i < m.num_nodes(); ++i)
    if (m.is_boundary(i)) v[i] = spec_.boundary[i];
  return v;
}

void Solver::check_boundary(const std::vector<double>& v) const
{
  const Mesh& m = *spec_.mesh;
  require(v.size() == m.num_nodes(), "Solver: field size does not match the mesh");
  for (std::size_t i = 0; i < m.num_nodes(); ++i) {
    if (m.is_boundary(i) && v[i] != spec_.boundary[i]) {
      throw std::invalid_argument("Solver: field does not match the boundary data at node " + std::to_string(i));
    }
  }
}

std::vector<double> Solver::load(double eps) const { return assembler_.load_vector(spec_, eps); }

double Solver::energy(const std::vector<double>& v, double eps) const
{
  check_boundary(v);
  const RegularizedOperator op(spec_.norm, spec_.p, eps);
  return assembler_.gradient_energy(op, v) - dot(load(eps), v);
}

std::vector<double> Solver::energy_gradient(const std::vector<double>& v, double eps) const
{
  check_boundary(v);
  const RegularizedOperator op(spec_.norm, spec_.p, eps);
  const std::vector<double> r = assembler_.stress_residual(op, v);
  const std::vector<double> b = load(eps);
  std::vector<double> g(assembler_.num_free());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const int i = assembler_.free_nodes()[k];
    g[k] = r[i] - b[i];
  }
  return g;
}

SolveReport Solver::minimize(double eps, const std::optional<std::vector<double>>& warm_start) const
{
  require(eps >= 0.0 && eps < 1.0, "minimize: eps must lie in [0, 1)");
  require(eps > 0.0 || spec_.p >= 2.0, "minimize: eps = 0 requires p >= 2 (the energy is not smooth otherwise)");
  const auto t0 = std::chrono::steady_clock::now();

  SolveReport rep;
  rep.eps = eps;
  std::vector<double> v = warm_start ? *warm_start : initial_guess();
  if (warm_start) check_boundary(v);

  const RegularizedOperator op(spec_.norm, spec_.p, eps);
  const std::vector<double> b = load(eps);
  const auto& free = assembler_.free_nodes();
  const std::size_t nf = free.size();

  auto energy_of = [&](const std::vector<double>& x, double* scale) {
    const double e = assembler_.gradient_energy(op, x);
    const double l = dot(b, x);
    if (scale != nullptr) *scale = std::abs(e) + std::abs(l);
    return e - l;
  };
  auto gradient_of = [&](const std::vector<double>& x) {
    const std::vector<double> r = assembler_.stress_residual(op, x);
    std::vector<double> g(nf);
    for (std::size_t k = 0; k < nf; ++k) g[k] = r[free[k]] - b[free[k]];
    return g;
  };

  double scale = 0.0;
  double J = energy_of(v, &scale);
  std::vector<double> g = gradient_of(v);
  double gnorm = norm2(g);
  rep.energy_history.push_back(J);
  rep.gradient_history.push_back(gnorm);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool analyzed = false;
  std::vector<double> s_prev;
  std::vector<double> y_prev;
  std::vector<double> trial(v.size());
  std::vector<double> d(nf);

  // Backtracking along d from v. Comparisons carry a roundoff allowance
  // relative to the magnitude of the summed energy terms.
  auto line_search = [&](const std::vector<double>& dir, double slope, double& J_new) {
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    double t = 1.0;
    for (int halving = 0; halving <= kMaxHalvings; ++halving, t *= 0.5) {
      trial = v;
      for (std::size_t k = 0; k < nf; ++k) trial[free[k]] += t * dir[k];
      J_new = energy_of(trial, nullptr);
      if (std::isfinite(J_new) && J_new <= J + kArmijo * t * slope + noise) return true;
    }
    return false;
  };

  auto bb_direction = [&]() {
    double step = 1.0 / std::max(gnorm, 1e-300);
    if (!s_prev.empty()) {
      const double sy = dot(s_prev, y_prev);
      if (sy > 0.0) step = dot(s_prev, s_prev) / sy;
    }
    for (std::size_t k = 0; k < nf; ++k) d[k] = -step * g[k];
  };

  for (int it = 0; it < spec_.tol.max_iter; ++it) {
    if (gnorm <= spec_.tol.grad_tol) break;

    bool newton = false;
    if (nf > 0) {
      const auto& H = assembler_.hessian(op, v);
      if (!analyzed) {
        ldlt.analyzePattern(H);
        analyzed = true;
      }
      ldlt.factorize(H);
      if (ldlt.info() == Eigen::Success) {
        const Eigen::Map<const Eigen::VectorXd> gv(g.data(), static_cast<Eigen::Index>(nf));
        const Eigen::VectorXd dv = -ldlt.solve(gv);
        if (ldlt.info() == Eigen::Success && dv.allFinite()) {
          for (std::size_t k = 0; k < nf; ++k) d[k] = dv(static_cast<Eigen::Index>(k));
          newton = dot(g, d) < 0.0;
        }
      }
    }
    if (!newton) bb_direction();

    double J_new = J;
    bool accepted = line_search(d, dot(g, d), J_new);
    if (!accepted && newton) {
      newton = false;
      bb_direction();
      accepted = line_search(d, dot(g, d), J_new);
    }
    if (!accepted) {
      rep.line_search_failed = true;
      break;
    }
    newton ? ++rep.newton_steps : ++rep.gradient_steps;

    std::vector<double> g_new = gradient_of(trial);
    s_prev.assign(nf, 0.0);
    y_prev.assign(nf, 0.0);
    for (std::size_t k = 0; k < nf; ++k) {
      s_prev[k] = trial[free[k]] - v[free[k]];
      y_prev[k] = g_new[k] - g[k];
    }
    const double decrease = J - J_new;
    v.swap(trial);
    g.swap(g_new);
    J = energy_of(v, &scale);
    gnorm = norm2(g);
    ++rep.iterations;
    rep.energy_history.push_back(J);
    rep.gradient_history.push_back(gnorm);
    if (spec_.tol.energy_tol > 0.0 && decrease < spec_.tol.energy_tol) break;
  }

  rep.converged = gnorm <= spec_.tol.grad_tol;
  rep.u = std::move(v);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<SolveReport> Solver::continuation_solve() const
{
  std::vector<SolveReport> out;
  for (double eps : spec_.eps_schedule) {
    SolveReport r = out.empty() ? minimize(eps) : minimize(eps, out.back().u);
    if (!out.empty()) r.increment = w1p_distance(*spec_.mesh, out.back().u, r.u, spec_.p);
    out.push_back(std::move(r));
  }
  return out;
}

double w1p_distance(const Mesh& mesh, const std::vector<double>& a, const std::vector<double>& b, double p)
{
  require(a.size() == mesh.num_nodes() && b.size() == mesh.num_nodes(), "w1p_distance: size mismatch");
  ScalarField e{Location::Node, std::vector<double>(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i) e.values[i] = a[i] - b[i];
  const Region all = Region::whole(mesh);
  const double lp = lq_norm(mesh, e, p, all);
  const double gp = sobolev_seminorm(mesh, e, p, all);
  return std::pow(std::pow(lp, p) + std::pow(gp, p), 1.0 / p);
}

namespace {

ProblemSpec linear_spec(std::shared_ptr<const Mesh> mesh)
{
  ProblemSpec spec;
  spec.norm = AnisotropicNorm::euclidean(mesh->dim());
  spec.p = 2.0;
  spec.boundary.assign(mesh->num_nodes(), 0.0);
  spec.eps_schedule = {0.0};
  spec.mesh = std::move(mesh);
  return spec;
}

ScalarField poisson_from_spec(const ProblemSpec& spec)
{
  const Assembler asmb(spec.mesh, Backend::Serial);
  const RegularizedOperator op(spec.norm, 2.0, 0.0);
  const std::vector<double> zero(spec.mesh->num_nodes(), 0.0);
  const auto& K = asmb.hessian(op, zero, 1.0);
  const std::vector<double> b = asmb.load_vector(spec, 0.0);
  const auto nf = static_cast<Eigen::Index>(asmb.num_free());
  Eigen::VectorXd rhs(nf);
  for (Eigen::Index k = 0; k < nf; ++k) rhs(k) = b[asmb.free_nodes()[k]];
  ScalarField w{Location::Node, zero};
  if (nf == 0) return w;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("poisson_solve: stiffness matrix is singular");
  const Eigen::VectorXd x = ldlt.solve(rhs);
  for (Eigen::Index k = 0; k < nf; ++k) w.values[asmb.free_nodes()[k]] = x(k);
  return w;
}

}  // namespace

ScalarField poisson_solve(std::shared_ptr<const Mesh> mesh, const PointFunction& f)
{
  ProblemSpec spec = linear_spec(std::move(mesh));
  spec.source = f;
  return poisson_from_spec(spec);
}

ScalarField poisson_solve(std::shared_ptr<const Mesh> mesh, const ScalarField& f_nodal)
{
  require(f_nodal.location == Location::Node && f_nodal.values.size() == mesh->num_nodes(),
          "poisson_solve: expected a nodal source");
  ProblemSpec spec = linear_spec(std::move(mesh));
  spec.source_nodal = f_nodal.values;
  return poisson_from_spec(spec);
}

double galerkin_residual(std::shared_ptr<const Mesh> mesh, const ScalarField& w, const PointFunction& f)
{
  ProblemSpec spec = linear_spec(std::move(mesh));
  spec.source = f;
  const Assembler asmb(spec.mesh, Backend::Serial);
  const RegularizedOperator op(spec.norm, 2.0, 0.0);
  const std::vector<double> r = asmb.stress_residual(op, w.values);
  const std::vector<double> b = asmb.load_vector(spec, 0.0);
  double worst = 0.0;
  for (int i : asmb.free_nodes()) worst = std::max(worst, std::abs(r[i] - b[i]));
  return worst;
}

}  // namespace plap
