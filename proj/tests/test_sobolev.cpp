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

#include "plap/sobolev.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace plap {
namespace {

constexpr double pi = std::numbers::pi;

TEST(Talenti, IsoperimetricEndpoint)
{
  // r = 1: 1 / (n omega_n^(1/n)) with omega_n the unit-ball volume.
  EXPECT_NEAR(talenti_constant(1.0, 2), 1.0 / (2.0 * std::sqrt(pi)), 1e-15);
  EXPECT_NEAR(talenti_constant(1.0, 3), 1.0 / (3.0 * std::cbrt(4.0 * pi / 3.0)), 1e-15);
}

TEST(Talenti, QuadraticCaseMatchesAubinForm)
{
  // r = 2: sqrt(4 / (n (n - 2))) |S^n|^(-1/n), |S^3| = 2 pi^2, |S^4| = 8 pi^2 / 3.
  EXPECT_NEAR(talenti_constant(2.0, 3), std::sqrt(4.0 / 3.0) * std::pow(2.0 * pi * pi, -1.0 / 3.0), 1e-14);
  EXPECT_NEAR(talenti_constant(2.0, 4), std::sqrt(0.5) * std::pow(8.0 * pi * pi / 3.0, -0.25), 1e-14);
}

TEST(Talenti, ContinuousAtTheEndpoint)
{
  for (int n : {2, 3}) EXPECT_NEAR(talenti_constant(1.0 + 1e-9, n), talenti_constant(1.0, n), 1e-7);
}

TEST(Talenti, RejectsOutOfRange)
{
  EXPECT_THROW((void)talenti_constant(0.5, 2), std::invalid_argument);
  EXPECT_THROW((void)talenti_constant(2.0, 2), std::invalid_argument);
  EXPECT_THROW((void)talenti_constant(1.5, 1), std::invalid_argument);
}

TEST(SourceExponent, Thresholds)
{
  // 2n/(n+2) is 1 in 2D and 6/5 in 3D.
  EXPECT_EQ(source_exponent(1.5, 2), 2.0);
  EXPECT_EQ(source_exponent(1.2, 3), 2.0);
  const double p = 1.1;
  const double p_star = 3.0 * p / (3.0 - p);
  EXPECT_NEAR(source_exponent(p, 3), p_star / (p_star - 1.0), 1e-15);
  EXPECT_THROW((void)source_exponent(1.0, 2), std::invalid_argument);
}

TEST(EnergyBound, ConstantsFollowTheClosedForm)
{
  const double p = 3.0, alpha = 2.0, measure = 4.0;
  const auto k = energy_bound_constants(p, 2, alpha, measure);
  EXPECT_EQ(k.q, 2.0);
  EXPECT_DOUBLE_EQ(k.p_prime, 1.5);
  const double c0 = talenti_constant(1.0, 2) * std::pow(measure, 0.5 + 0.5 - 1.0 / 3.0);
  EXPECT_NEAR(k.c0, c0, 1e-15);
  EXPECT_NEAR(k.c_under, std::pow(2.0, 2.5) * 2.0 * std::pow(alpha, 1.5) * std::pow(c0, 1.5), 1e-13);
  // Below the threshold the constant is the sharp one for r = p itself.
  const auto low = energy_bound_constants(1.1, 3, 1.0, 1.0);
  EXPECT_NEAR(low.c0, talenti_constant(1.1, 3), 1e-15);
  EXPECT_THROW((void)energy_bound_constants(2.0, 2, 0.0, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace plap
