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

#include "generators.hpp"

#include "plap/manufactured.hpp"
#include "plap/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace plap {
namespace {

using testing::Gen;

std::shared_ptr<const Mesh> square(int n, double lo = -1.0, double hi = 1.0)
{
  return std::make_shared<const Mesh>(Mesh::structured({Vec::Constant(2, lo), Vec::Constant(2, hi)}, {n, n}));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

TEST(Solver, DefaultSchedule)
{
  const auto s = default_eps_schedule(0.1);
  EXPECT_EQ(s, (std::vector<double>{0.5, 0.25, 0.125}));
  const auto fine = default_eps_schedule(1e-6);
  EXPECT_GE(fine.back(), 1e-4);
  EXPECT_LT(fine.back() / 2, 1e-4);
}

TEST(Solver, QuadraticCaseMatchesLinearSolve)
{
  const auto m = square(32);
  ProblemSpec spec;
  spec.mesh = m;
  spec.p = 2.0;
  spec.source = [](const Vec&) { return 1.0; };
  spec.boundary.assign(m->num_nodes(), 0.0);
  spec.eps_schedule = {0.0};
  const SolveReport rep = Solver(spec).minimize(0.0);
  ASSERT_TRUE(rep.converged);
  const ScalarField w = poisson_solve(m, spec.source);
  EXPECT_LT(max_abs_diff(rep.u, w.values), 1e-10);
  EXPECT_LT(galerkin_residual(m, w, spec.source), 1e-13);
}

TEST(Solver, PoissonEigenfunction)
{
  // -Laplace w = sin(pi x) sin(pi y) on the unit square has w = sin(pi x) sin(pi y) / (2 pi^2).
  const auto f = [](const Vec& x) { return std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]); };
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const auto m = square(n, 0.0, 1.0);
    const ScalarField w = poisson_solve(m, f);
    double err = 0.0;
    for (std::size_t i = 0; i < m->num_nodes(); ++i)
      err = std::max(err, std::abs(w.values[i] - f(m->node(i)) / (2 * std::numbers::pi * std::numbers::pi)));
    EXPECT_LT(err, 0.05 * m->h() * m->h());
    if (prev > 0.0) EXPECT_GT(prev / err, 3.5);  // second order
    prev = err;
  }
}

TEST(Solver, AffineDataGivesAffineMinimizer)
{
  // f = 0 with affine boundary data: the affine interpolant has constant
  // stress, so it is the discrete minimizer for every norm and exponent.
  Gen gen(17);
  const auto m = square(8);
  for (int family = 0; family < 3; ++family) {
    for (double p : {1.5, 2.0, 3.5}) {
      const Vec a = gen.moderate_vec(2);
      const double c = gen.uniform(-1, 1);
      ProblemSpec spec;
      spec.mesh = m;
      spec.norm = gen.norm(family, 2);
      spec.p = p;
      spec.source = [](const Vec&) { return 0.0; };
      spec.boundary = sample_nodes(*m, [&](const Vec& x) { return a.dot(x) + c; });
      spec.eps_schedule = {0.1};
      const SolveReport rep = Solver(spec).minimize(0.1);
      ASSERT_TRUE(rep.converged);
      EXPECT_LT(max_abs_diff(rep.u, spec.boundary), 1e-9) << "family " << family << " p " << p;
    }
  }
}

TEST(Solver, EnergyDecreasesAndGradientVanishes)
{
  const auto m = square(16);
  for (double p : {1.5, 3.0}) {
    ProblemSpec spec;
    spec.mesh = m;
    spec.norm = AnisotropicNorm::weighted({1.0, 3.0});
    spec.p = p;
    spec.source = [](const Vec& x) { return 1.0 + x[0]; };
    spec.boundary.assign(m->num_nodes(), 0.0);
    spec.eps_schedule = {0.5, 0.25, 0.125};
    const Solver solver(spec);
    const auto stages = solver.continuation_solve();
    ASSERT_EQ(stages.size(), 3u);
    for (const SolveReport& s : stages) {
      EXPECT_TRUE(s.converged);
      for (std::size_t k = 1; k < s.energy_history.size(); ++k)
        EXPECT_LE(s.energy_history[k], s.energy_history[k - 1] + 1e-12 * std::abs(s.energy_history[k - 1]));
      const auto g = solver.energy_gradient(s.u, s.eps);
      double n2 = 0.0;
      for (double v : g) n2 += v * v;
      EXPECT_LE(std::sqrt(n2), spec.tol.grad_tol);
    }
    EXPECT_EQ(stages.front().increment, 0.0);
    EXPECT_GT(stages.back().increment, 0.0);
    EXPECT_NEAR(stages.back().increment, w1p_distance(*m, stages[2].u, stages[1].u, p), 1e-15);
  }
}

TEST(Solver, SerialAndOpenMPSolvesAgree)
{
  const auto m = square(12);
  ProblemSpec spec;
  spec.mesh = m;
  spec.p = 3.0;
  spec.source = [](const Vec& x) { return std::cos(x[0]) + x[1]; };
  spec.boundary.assign(m->num_nodes(), 0.0);
  spec.eps_schedule = {0.5, 0.1};
  const auto a = Solver(spec, Backend::Serial).continuation_solve();
  const auto b = Solver(spec, Backend::OpenMP).continuation_solve();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].u, b[k].u);
    EXPECT_EQ(a[k].energy_history, b[k].energy_history);
  }
}

TEST(Solver, TorsionConvergesAtFirstOrder)
{
  for (double p : {1.5, 2.0, 3.0}) {
    const ManufacturedCase mc = manufactured_torsion(p, 2, 1.0, Vec::Zero(2));
    std::vector<double> errs;
    for (int n : {8, 16, 32}) {
      const auto m = square(n);
      const std::vector<double> sched = p < 2 ? std::vector<double>{0.5, 0.1, 0.01, 1e-3} : std::vector<double>{0.5, 0.0};
      const auto stages = Solver(manufactured_problem(m, mc, sched)).continuation_solve();
      ASSERT_TRUE(stages.back().converged);
      errs.push_back(error_norms(*m, stages.back().u, mc, p).w1p);
    }
    for (std::size_t k = 1; k < errs.size(); ++k) EXPECT_GT(std::log2(errs[k - 1] / errs[k]), 0.8) << "p " << p;
  }
}

TEST(Solver, RejectsInvalidInput)
{
  const auto m = square(4);
  ProblemSpec spec;
  spec.mesh = m;
  spec.p = 1.5;
  spec.source = [](const Vec&) { return 1.0; };
  spec.boundary.assign(m->num_nodes(), 0.0);
  spec.eps_schedule = {0.1, 0.0};
  EXPECT_THROW(Solver{spec}, std::invalid_argument);  // eps = 0 needs p >= 2
  spec.eps_schedule = {0.1};
  const Solver solver(spec);
  EXPECT_THROW((void)solver.minimize(0.0), std::invalid_argument);
  std::vector<double> bad(m->num_nodes(), 1.0);
  EXPECT_THROW((void)solver.energy(bad, 0.1), std::invalid_argument);
  spec.boundary.resize(3);
  EXPECT_THROW(Solver{spec}, std::invalid_argument);
}

TEST(Solver, W1pDistance)
{
  const auto m = square(8);
  const std::vector<double> a = sample_nodes(*m, [](const Vec& x) { return x[0]; });
  const std::vector<double> zero(m->num_nodes(), 0.0);
  EXPECT_EQ(w1p_distance(*m, a, a, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(w1p_distance(*m, a, zero, 2.0), w1p_distance(*m, zero, a, 2.0));
  // ||x||_2^2 over [-1,1]^2 is 4/3 and ||grad x||_2^2 is 4.
  EXPECT_NEAR(w1p_distance(*m, a, zero, 2.0), std::sqrt(4.0 / 3.0 + 4.0), 2e-2);
}

}  // namespace
}  // namespace plap
