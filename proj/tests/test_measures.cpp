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

#include "plap/measures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

namespace plap {
namespace {

using testing::Gen;
using testing::vec2;

std::shared_ptr<const Mesh> square(int n, double lo = 0.0, double hi = 1.0)
{
  return std::make_shared<const Mesh>(Mesh::structured({Vec::Constant(2, lo), Vec::Constant(2, hi)}, {n, n}));
}

ScalarField sample(const Mesh& m, const std::function<double(const Vec&)>& g)
{
  ScalarField f{Location::Node, std::vector<double>(m.num_nodes())};
  for (std::size_t i = 0; i < m.num_nodes(); ++i) f.values[i] = g(m.node(i));
  return f;
}

TEST(Measures, GradientOfAffineIsExact)
{
  const auto m = square(6);
  const ScalarField u = sample(*m, [](const Vec& x) { return 2.0 * x[0] - 3.0 * x[1] + 1.0; });
  const VectorField g = gradient(*m, u);
  ASSERT_EQ(g.size(), m->num_cells());
  for (std::size_t c = 0; c < g.size(); ++c) EXPECT_LT((g.at(c) - vec2(2.0, -3.0)).norm(), 1e-12);
}

TEST(Measures, HessianRecoveryIsExactForQuadratics)
{
  Gen gen(21);
  for (int dim : {2, 3}) {
    const auto m = std::make_shared<const Mesh>(
        Mesh::structured({Vec::Zero(dim), Vec::Ones(dim)}, std::vector<int>(dim, dim == 2 ? 8 : 4)));
    Mat A = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = gen.uniform(-2, 2);
    const Vec b = gen.moderate_vec(dim);
    const ScalarField u = sample(*m, [&](const Vec& x) { return 0.5 * x.dot(A * x) + b.dot(x); });
    const MatrixField H = hessian(*m, u);
    std::size_t interior = 0;
    for (std::size_t i = 0; i < m->num_nodes(); ++i) {
      EXPECT_EQ(H.valid[i] != 0, !m->is_boundary(i));
      if (!H.valid[i]) continue;
      EXPECT_LT((H.at(i) - A).norm(), 1e-9) << "node " << i;
      ++interior;
    }
    EXPECT_GT(interior, 0u);
  }
}

TEST(Measures, IntegrationAndNorms)
{
  const auto m = square(16);
  const Region all = Region::whole(*m);
  const ScalarField one = sample(*m, [](const Vec&) { return 1.0; });
  EXPECT_NEAR(integrate(*m, one, all), 1.0, 1e-14);
  // The vertex average integrates affine fields exactly.
  const ScalarField lin = sample(*m, [](const Vec& x) { return x[0] + 2 * x[1]; });
  EXPECT_NEAR(integrate(*m, lin, all), 1.5, 1e-13);
  const ScalarField two = sample(*m, [](const Vec&) { return -2.0; });
  EXPECT_NEAR(lq_norm(*m, two, 3.0, all), 2.0, 1e-13);
  EXPECT_THROW((void)lq_norm(*m, two, 0.5, all), std::invalid_argument);
  EXPECT_NEAR(sobolev_seminorm(*m, lin, 2.0, all), std::sqrt(5.0), 1e-12);
  const ScalarField w = sample(*m, [](const Vec& x) { return x[1]; });
  EXPECT_NEAR(integrate(*m, one, all, &w), 0.5, 1e-13);
}

TEST(Measures, MorreyNormOfConstant)
{
  // For f = c, rho^-lambda int_{B_rho} c^2 = c^2 pi rho^(2-lambda), largest at the largest radius.
  const auto m = square(128);
  const ScalarField f = sample(*m, [](const Vec&) { return 3.0; });
  const std::vector<Vec> centers{vec2(0.5, 0.5), vec2(0.4, 0.6)};
  const std::vector<double> radii{0.1, 0.2, 0.35};
  const double lambda = 1.5;
  const MorreyEstimate est = morrey_norm(*m, f, lambda, centers, radii);
  EXPECT_EQ(est.samples, 6u);
  const double expected = 3.0 * std::sqrt(std::numbers::pi * std::pow(0.35, 2.0 - lambda));
  EXPECT_NEAR(est.value, expected, 5e-3 * expected);
  EXPECT_THROW(morrey_norm(*m, f, 0.0, centers, radii), std::invalid_argument);
  EXPECT_THROW(morrey_norm(*m, f, 2.0, centers, radii), std::invalid_argument);
  EXPECT_THROW(morrey_norm(*m, f, 1.5, centers, std::vector<double>{0.6}), std::invalid_argument);
}

TEST(Measures, HolderOfIdentityField)
{
  // F(x) = x has [F]_alpha = max |x - y|^(1 - alpha) = diameter^(1 - alpha).
  Gen gen(4);
  std::vector<Vec> pts;
  for (int i = 0; i < 60; ++i) pts.push_back(vec2(gen.uniform(0, 1), gen.uniform(0, 1)));
  double diam = 0.0;
  for (const Vec& a : pts)
    for (const Vec& b : pts) diam = std::max(diam, (a - b).norm());
  double sup = 0.0;
  for (const Vec& a : pts) sup = std::max(sup, a.norm());
  const HolderEstimate est = holder_seminorm(pts, pts, 0.25, 10000, 0);
  EXPECT_EQ(est.pairs, 60u * 59u / 2u);
  EXPECT_NEAR(est.seminorm, std::pow(diam, 0.75), 1e-14);
  EXPECT_DOUBLE_EQ(est.sup, sup);
  EXPECT_DOUBLE_EQ(est.norm(), est.seminorm + est.sup);
}

TEST(Measures, HolderSamplingIsPrefixStable)
{
  Gen gen(8);
  std::vector<Vec> pts, vals;
  for (int i = 0; i < 300; ++i) {
    pts.push_back(vec2(gen.uniform(0, 1), gen.uniform(0, 1)));
    vals.push_back(vec2(gen.uniform(-1, 1), gen.uniform(-1, 1)));
  }
  double last = 0.0;
  for (std::size_t samples : {500u, 2000u, 8000u}) {
    const HolderEstimate est = holder_seminorm(pts, vals, 0.5, samples, 42);
    EXPECT_LE(est.pairs, samples);
    EXPECT_GT(est.pairs, samples * 9 / 10);
    EXPECT_GE(est.seminorm, last);
    last = est.seminorm;
  }
  EXPECT_EQ(holder_seminorm(pts, vals, 0.5, 2000, 42).seminorm, holder_seminorm(pts, vals, 0.5, 2000, 42).seminorm);
}

TEST(Measures, FieldCsvHeaderAndRows)
{
  const auto m = square(2);
  const std::vector<double> u(m->num_nodes(), 0.5);
  std::ostringstream os;
  write_field_csv(os, *m, Location::Node, {"u"}, {&u});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "x,y,u");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, m->num_nodes());
}

}  // namespace
}  // namespace plap
