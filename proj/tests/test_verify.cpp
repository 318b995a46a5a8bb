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

#include "plap/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace plap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::shared_ptr<const Mesh> square(int n, double lo = -1.0, double hi = 1.0)
{
  return std::make_shared<const Mesh>(Mesh::structured({Vec::Constant(2, lo), Vec::Constant(2, hi)}, {n, n}));
}

struct Solved {
  ManufacturedCase mc;
  ProblemSpec spec;
  std::vector<SolveReport> stages;
};

Solved torsion(double p, int n)
{
  Solved s;
  s.mc = manufactured_torsion(p, 2, 1.0, Vec::Zero(2));
  std::vector<double> sched{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 1e-3, 1e-4};
  if (p >= 2.0) sched.push_back(0.0);
  s.spec = manufactured_problem(square(n), s.mc, sched);
  s.stages = Solver(s.spec).continuation_solve();
  return s;
}

TEST(Stability, Metrics)
{
  EXPECT_DOUBLE_EQ(variation(std::vector<double>{1.0, 1.2, 0.8}), 0.5);
  EXPECT_EQ(variation(std::vector<double>{}), 0.0);
  EXPECT_EQ(variation(std::vector<double>{1.0, 0.0}), kInf);
  EXPECT_TRUE(decreasing_with_slack(std::vector<double>{1.0, 1.05, 0.5}, 0.1));
  EXPECT_FALSE(decreasing_with_slack(std::vector<double>{1.0, 1.2}, 0.1));
  EXPECT_TRUE(uniformly_bounded(std::vector<double>{5.0, 1.0, 1.1, 1.2}));
  EXPECT_FALSE(uniformly_bounded(std::vector<double>{1.0, 2.0, 4.0}));
  EXPECT_FALSE(uniformly_bounded(std::vector<double>{1.0, kInf, 1.0}));
}

TEST(EstimateReport, EmpiricalConstant)
{
  EstimateReport r;
  r.lhs = 3.0;
  r.rhs = {{"a", 1.0}, {"b", 0.5}};
  r.finish();
  EXPECT_DOUBLE_EQ(r.c_emp, 2.0);
  r.lhs = 0.0;
  r.rhs = {{"a", 0.0}};
  r.finish();
  EXPECT_EQ(r.c_emp, 0.0);
  r.lhs = 1.0;
  r.finish();
  EXPECT_EQ(r.c_emp, kInf);
}

TEST(Registry, IdsAreUniqueAndDescribed)
{
  std::set<std::string> ids;
  for (const auto& e : estimate_registry()) {
    EXPECT_TRUE(ids.insert(e.id).second) << e.id;
    EXPECT_FALSE(e.description.empty());
  }
  for (const char* id : {"energy_bound", "caccioppoli", "stress_l1", "hessian_weighted", "critical_set", "campanato",
                         "convergence"})
    EXPECT_TRUE(ids.count(id)) << id;
}

TEST(Checks, TorsionInstance)
{
  const Solved s = torsion(1.5, 32);
  const SolveReport& fin = s.stages.back();
  ASSERT_TRUE(fin.converged);

  for (const SolveReport& st : s.stages) {
    const EstimateReport e = check_energy_bound(s.spec, st, fin.u);
    EXPECT_TRUE(e.hard);
    EXPECT_TRUE(e.passed) << "eps " << st.eps;
    EXPECT_LE(e.lhs, e.rhs_total());
    EXPECT_TRUE(check_residual(s.spec, st).passed);
  }

  // |a(grad u)| = |grad u|^(p-1) pointwise for Euclidean H.
  for (const EstimateReport& r : check_stress_estimates(s.spec, fin, 0.4, Vec::Zero(2))) {
    EXPECT_TRUE(std::isfinite(r.c_emp)) << r.id;
    EXPECT_GT(r.c_emp, 0.0) << r.id;
    if (r.id == "stress_l1") EXPECT_NEAR(r.c_emp, 1.0, 1e-12);
  }
  EXPECT_TRUE(std::isfinite(check_caccioppoli(s.spec, fin, make_cutoff(*s.spec.mesh, Vec::Zero(2), 0.4, 0.8)).c_emp));
  EXPECT_TRUE(std::isfinite(check_hessian_unweighted(s.spec, fin, 0.4, Vec::Zero(2)).c_emp));
  EXPECT_THROW(check_stress_estimates(s.spec, fin, 0.6, Vec::Zero(2)), std::invalid_argument);
}

TEST(Checks, WeightedHessianClosedForm)
{
  // For the torsion case the integrand is the constant n^-2 (1/(p-1)^2 + n - 1)
  // off the ball of radius n delta^(p-1).
  for (double p : {1.5, 3.0}) {
    const Solved s = torsion(p, 64);
    const double R = 0.48;
    std::vector<double> deltas;
    for (double r : {0.05, 0.1}) deltas.push_back(std::pow(r / 2.0, 1.0 / (p - 1.0)));
    const EstimateReport wh = check_hessian_weighted(s.spec, s.stages.back(), R, Vec::Zero(2), deltas);
    EXPECT_TRUE(wh.passed);
    ASSERT_EQ(wh.history.size(), 2u);
    EXPECT_GE(wh.history[0], wh.history[1]);
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      const double r = 2.0 * std::pow(deltas[k], p - 1.0);
      const double oracle = s.mc.weighted_hessian_density * std::numbers::pi * (R * R / 4.0 - r * r);
      EXPECT_NEAR(wh.history[k], oracle, 0.05 * oracle) << "p " << p;
    }
    EXPECT_NEAR(s.mc.weighted_hessian_density, (1.0 / ((p - 1) * (p - 1)) + 1.0) / 4.0, 1e-15);
  }
}

TEST(Checks, CriticalSetExponent)
{
  const Solved s = torsion(2.0, 64);
  std::vector<double> ladder;
  for (int k = 0; k < 5; ++k) ladder.push_back(0.6 * std::pow(0.7, k) / 2.0);
  const CriticalSetTable t = check_critical_set(s.spec, s.stages.back(), ladder, &s.mc);
  EXPECT_TRUE(t.applicable);
  EXPECT_TRUE(t.monotone);
  EXPECT_TRUE(t.strictly_decreasing);
  EXPECT_DOUBLE_EQ(t.expected_exponent, 2.0);
  EXPECT_NEAR(t.fitted_exponent, 2.0, 0.1);
  for (const auto& row : t.rows) {
    EXPECT_NEAR(row.measure, row.expected, 0.05 * row.expected);
    EXPECT_NEAR(row.f_integral, row.measure, 1e-12);  // f = 1
    EXPECT_NEAR(row.expected, std::numbers::pi * std::pow(2.0 * row.delta, 2.0), 1e-14);
  }
}

TEST(Checks, CampanatoIdentityAndGuards)
{
  const auto m = square(32, 0.0, 1.0);
  const EstimateReport r = check_campanato_lemma(m, [](const Vec&) { return 1.0; }, 1.5);
  EXPECT_TRUE(r.hard);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.history[0], 1e-8);
  EXPECT_GT(r.c_emp, 0.0);
  const EstimateReport zero = check_campanato_lemma(m, [](const Vec&) { return 0.0; }, 1.5);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_EQ(zero.c_emp, 0.0);
  EXPECT_THROW(check_campanato_lemma(m, [](const Vec&) { return 1.0; }, 0.0), std::invalid_argument);
  EXPECT_THROW(check_campanato_lemma(m, [](const Vec&) { return 1.0; }, 2.0), std::invalid_argument);
  // lambda = n - 2n/r lies in (n - 2, n) for every r > n.
  for (double r : {2.5, 4.0, 100.0}) EXPECT_NO_THROW(check_campanato_lemma(m, [](const Vec&) { return 1.0; }, 2.0 - 4.0 / r));
}

TEST(Checks, ConvergenceTables)
{
  const Solved s3 = torsion(3.0, 16);
  const std::span<const SolveReport> earlier(s3.stages.data(), s3.stages.size() - 1);
  const ConvergenceTable t = check_convergence(s3.spec, earlier, s3.stages.back().u);
  EXPECT_TRUE(t.w1p_decreasing);
  EXPECT_TRUE(t.gap_decreasing);
  // Repeating a stage gives an exact zero row.
  const ConvergenceTable same = check_convergence(s3.spec, earlier, earlier.back().u);
  EXPECT_EQ(same.rows.back().w1p, 0.0);
  EXPECT_EQ(same.rows.back().gap, 0.0);
  EXPECT_THROW(check_convergence(s3.spec, earlier.first(2), s3.stages.back().u), std::invalid_argument);

  const Solved s2 = torsion(2.0, 16);
  const ConvergenceTable lin =
      check_convergence(s2.spec, std::span<const SolveReport>(s2.stages.data(), s2.stages.size() - 1), s2.stages.back().u);
  for (const auto& row : lin.rows) EXPECT_LE(row.w1p, 1e-8);
}

TEST(Checks, CorruptedFieldFailsHardChecks)
{
  const Solved s = torsion(3.0, 16);
  SolveReport bad = s.stages.back();
  for (std::size_t i = 0; i < bad.u.size(); ++i)
    if (!s.spec.mesh->is_boundary(i)) bad.u[i] += 0.1 * static_cast<double>(static_cast<int>(i % 7) - 3);
  EXPECT_FALSE(check_residual(s.spec, bad).passed);
}

TEST(Csv, ReportHeader)
{
  const Solved s = torsion(2.0, 16);
  const auto reports = check_stress_estimates(s.spec, s.stages.back(), 0.4, Vec::Zero(2));
  std::vector<EstimateReport> l2;
  for (const auto& r : reports)
    if (r.id == "stress_l2") l2.push_back(r);
  std::ostringstream os;
  write_reports_csv(os, l2);
  const std::string text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "instance,estimate_id,h,eps,R,lhs,rhs_term:annulus_stress,rhs_term:source,c_emp");
  EXPECT_NE(text.find(",stress_l2,"), std::string::npos);
  EXPECT_EQ(format_number(0.1), "1.0000000000e-01");
}

}  // namespace
}  // namespace plap
