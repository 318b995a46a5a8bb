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

// Seeded generators for property tests.

#include "plap/norms.hpp"
#include "plap/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace plap::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Nonzero vector with log-uniform length in [1e-3, 1e3] and a uniform direction.
  Vec nonzero_vec(int dim)
  {
    Vec v(dim);
    do {
      for (int i = 0; i < dim; ++i) v[i] = std::normal_distribution<double>()(rng_);
    } while (v.norm() < 1e-8);
    return v.normalized() * std::pow(10.0, uniform(-3.0, 3.0));
  }

  /// Vector with unit-scale length, for finite-difference checks.
  Vec moderate_vec(int dim)
  {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(-2.0, 2.0);
    if (v.norm() < 0.1) v[0] += 0.5;
    return v;
  }

  std::vector<double> weights(int dim)
  {
    std::vector<double> w(dim);
    for (double& x : w) x = std::pow(10.0, uniform(-1.0, 1.0));
    return w;
  }

  /// One norm from each built-in family, chosen by `family` in {0, 1, 2}.
  AnisotropicNorm norm(int family, int dim)
  {
    switch (family) {
      case 0: return AnisotropicNorm::euclidean(dim);
      case 1: return AnisotropicNorm::weighted(weights(dim));
      default:
        return AnisotropicNorm::power_combination(AnisotropicNorm::euclidean(dim),
                                                  AnisotropicNorm::weighted(weights(dim)), uniform(0.5, 2.0),
                                                  uniform(0.5, 2.0), uniform(1.0, 4.0));
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline Vec vec2(double a, double b)
{
  Vec v(2);
  v << a, b;
  return v;
}

inline Vec vec3(double a, double b, double c)
{
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace plap::testing
