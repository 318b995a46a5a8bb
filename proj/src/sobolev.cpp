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

#include "plap/types.hpp"

#include <cmath>
#include <numbers>

namespace plap {

double talenti_constant(double r, int n)
{
  require(n >= 2, "talenti_constant: n must be >= 2");
  require(r >= 1.0 && r < n, "talenti_constant: r must lie in [1, n)");
  const double dn = n;
  const double bracket =
      std::tgamma(1.0 + dn / 2) * std::tgamma(dn) / (std::tgamma(dn / r) * std::tgamma(1.0 + dn - dn / r));
  const double shape = r == 1.0 ? 1.0 : std::pow((r - 1.0) / (dn - r), 1.0 - 1.0 / r);
  return std::pow(std::numbers::pi, -0.5) * std::pow(dn, -1.0 / r) * shape * std::pow(bracket, 1.0 / dn);
}

double source_exponent(double p, int n)
{
  require(p > 1.0 && n >= 2, "source_exponent: need p > 1 and n >= 2");
  if (p >= 2.0 * n / (n + 2.0)) return 2.0;
  const double p_star = n * p / (n - p);
  return p_star / (p_star - 1.0);
}

EnergyBoundConstants energy_bound_constants(double p, int n, double alpha, double measure)
{
  require(p > 1.0 && alpha > 0.0 && measure > 0.0, "energy_bound_constants: invalid arguments");
  EnergyBoundConstants k;
  k.q = source_exponent(p, n);
  k.p_prime = p / (p - 1.0);
  const double r_crit = 2.0 * n / (n + 2.0);
  if (p >= r_crit) {
    k.c0 = talenti_constant(r_crit, n) * std::pow(measure, 0.5 + 1.0 / n - 1.0 / p);
  } else {
    k.c0 = talenti_constant(p, n);
  }
  k.c_under = std::pow(2.0, k.p_prime + 1.0) * (p - 1.0) * std::pow(alpha, k.p_prime) * std::pow(k.c0, k.p_prime);
  return k;
}

}  // namespace plap
