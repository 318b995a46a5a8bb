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

#include "plap/expression.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace plap {
namespace {

using testing::Gen;
using testing::vec2;
using testing::vec3;

double eval(const char* text, const Vec& x = vec2(0.0, 0.0))
{
  return Expression::parse(text)(x);
}

TEST(Expression, ArithmeticAndPrecedence)
{
  EXPECT_DOUBLE_EQ(eval("1 + 2 * 3"), 7.0);
  EXPECT_DOUBLE_EQ(eval("(1 + 2) * 3"), 9.0);
  EXPECT_DOUBLE_EQ(eval("8 / 4 / 2"), 1.0);
  EXPECT_DOUBLE_EQ(eval("2 - 3 - 4"), -5.0);
  EXPECT_DOUBLE_EQ(eval("2 ^ 3 ^ 2"), 512.0);
  EXPECT_DOUBLE_EQ(eval("-2 ^ 2"), -4.0);
  EXPECT_DOUBLE_EQ(eval("2 ^ -1"), 0.5);
  EXPECT_DOUBLE_EQ(eval("--3"), 3.0);
  EXPECT_DOUBLE_EQ(eval("1.5e2 + .5"), 150.5);
}

TEST(Expression, FunctionsAndConstants)
{
  EXPECT_NEAR(eval("sin(pi / 2) + cos(0) + exp(0) + log(e) + sqrt(16) + abs(-2)"), 10.0, 1e-15);
  EXPECT_NEAR(eval("tan(pi / 4)"), 1.0, 1e-15);
}

TEST(Expression, Coordinates)
{
  const Vec p = vec3(0.3, -0.4, 1.2);
  EXPECT_DOUBLE_EQ(eval("x", p), 0.3);
  EXPECT_DOUBLE_EQ(eval("y", p), -0.4);
  EXPECT_DOUBLE_EQ(eval("z", p), 1.2);
  EXPECT_NEAR(eval("|x, y|", p), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(eval("|y|", p), 0.4);
  EXPECT_DOUBLE_EQ(eval("||y| - 1|", p), 0.6);
  EXPECT_DOUBLE_EQ(eval("|x| * |y|", p), 0.3 * 0.4);
  EXPECT_EQ(Expression::parse("1 + x").arity(), 1);
  EXPECT_EQ(Expression::parse("y").arity(), 2);
  EXPECT_EQ(Expression::parse("z + 1").arity(), 3);
  EXPECT_EQ(Expression::parse("pi").arity(), 0);
  EXPECT_THROW((void)eval("z", vec2(0, 0)), std::out_of_range);
}

TEST(Expression, MatchesNativeEvaluation)
{
  const Expression e = Expression::parse("1 + 0.5 * sin(pi * x) * sin(pi * y) - |x, y|^2 / (2 + exp(-x))");
  Gen gen(12);
  for (int k = 0; k < 200; ++k) {
    const Vec p = vec2(gen.uniform(-2, 2), gen.uniform(-2, 2));
    const double x = p[0], y = p[1];
    const double expected = 1 + 0.5 * std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y) -
                            (x * x + y * y) / (2 + std::exp(-x));
    EXPECT_NEAR(e(p), expected, 1e-13);
  }
}

TEST(Expression, ErrorsCarryPositions)
{
  const auto offset = [](const char* text) {
    try {
      (void)Expression::parse(text);
    } catch (const ExpressionError& e) {
      return static_cast<long>(e.position());
    }
    return -1L;
  };
  EXPECT_EQ(offset("1 + foo(x)"), 4);
  EXPECT_EQ(offset("(1 + 2"), 6);
  EXPECT_EQ(offset("1 +"), 3);
  EXPECT_EQ(offset("2 $ 3"), 2);
  EXPECT_EQ(offset("sin x"), 4);
  EXPECT_EQ(offset("|x"), 2);
  EXPECT_EQ(offset(""), 0);
}

}  // namespace
}  // namespace plap
