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

namespace plap {

/// Sharp constant in ||v||_{L^{r*}(R^n)} <= C_s(r, n) ||grad v||_{L^r(R^n)},
/// r* = nr/(n - r), for 1 <= r < n (Talenti/Aubin closed form):
///
///   C_s = pi^(-1/2) n^(-1/r) ((r-1)/(n-r))^(1-1/r)
///         [Gamma(1+n/2) Gamma(n) / (Gamma(n/r) Gamma(1+n-n/r))]^(1/n)
///
/// At r = 1 this is 1/(n omega_n^(1/n)).
double talenti_constant(double r, int n);

/// Source integrability exponent: 2 if p >= 2n/(n+2), else (p*)' with p* = np/(n-p).
double source_exponent(double p, int n);

/// Constants of the explicit a priori energy bound
///   int (eps^2 + H^2(grad u_eps))^(p/2) <= (2^p + 1) int H^p(grad u)
///                                          + C_under ||f||_{L^q}^(p') + 2^p eps^p |Omega'|
struct EnergyBoundConstants {
  double q = 2.0;
  double p_prime = 2.0;
  double c0 = 0.0;       ///< Sobolev-Poincare constant for ||v||_{L^q'} <= c0 ||grad v||_{L^p}
  double c_under = 0.0;  ///< 2^(p'+1) (p-1) alpha^(p') c0^(p')
};

EnergyBoundConstants energy_bound_constants(double p, int n, double alpha, double measure);

}  // namespace plap
