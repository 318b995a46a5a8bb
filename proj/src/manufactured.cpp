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

#include "plap/manufactured.hpp"

#include "plap/kernels.hpp"

#include <cmath>
#include <numbers>

namespace plap {

namespace {

double unit_ball_volume(int n) { return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(1.0 + 0.5 * n); }

}  // namespace

ManufacturedCase manufactured_torsion(double p, int n, double radius, const Vec& center)
{
  require(p > 1.0, "manufactured_torsion: p must be > 1");
  require(n == 2 || n == 3, "manufactured_torsion: n must be 2 or 3");
  require(radius > 0.0, "manufactured_torsion: radius must be positive");
  require_dim(center, n, "manufactured_torsion");

  ManufacturedCase mc;
  mc.name = "torsion";
  mc.p = p;
  mc.dim = n;
  mc.radius = radius;
  mc.center = center;
  const double e = p / (p - 1.0);
  const double k = (p - 1.0) / p * std::pow(static_cast<double>(n), -1.0 / (p - 1.0));
  const double top = std::pow(radius, e);
  mc.u = [=](const Vec& x) { return k * (top - std::pow((x - center).norm(), e)); };
  mc.grad = [=](const Vec& x) -> Vec {
    const Vec d = x - center;
    const double r = d.norm();
    if (r == 0.0) return Vec::Zero(n);
    // |grad u| = (r/n)^(1/(p-1)), pointing inward
    return -std::pow(r / n, 1.0 / (p - 1.0)) / r * d;
  };
  mc.stress = [=](const Vec& x) -> Vec { return -(x - center) / static_cast<double>(n); };
  mc.source = [](const Vec&) { return 1.0; };
  mc.weighted_hessian_density = (1.0 / ((p - 1.0) * (p - 1.0)) + (n - 1.0)) / (1.0 * n * n);
  const double omega = unit_ball_volume(n);
  mc.critical_measure = [=](double delta) {
    return omega * std::pow(static_cast<double>(n), n) * std::pow(delta, n * (p - 1.0));
  };
  return mc;
}

ManufacturedCase manufactured_torsion(const AnisotropicNorm& H, double p, double radius, const Vec& center)
{
  require(H.family() == NormFamily::Euclidean, "manufactured_torsion: only the Euclidean norm has this closed form");
  return manufactured_torsion(p, H.dim(), radius, center);
}

ErrorNorms error_norms(const Mesh& mesh, const std::vector<double>& u_h, const ManufacturedCase& mc, double p)
{
  require(u_h.size() == mesh.num_nodes(), "error_norms: field size does not match the mesh");
  const int dim = mesh.dim();
  const auto& quad = load_quadrature(dim);
  double l2 = 0.0;
  double lp = 0.0;
  double gp = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cell(c);
    Vec gh = Vec::Zero(dim);
    for (int k = 0; k <= dim; ++k) gh += u_h[cell[k]] * mesh.basis_gradient(c, k);
    for (const auto& q : quad) {
      Vec x = Vec::Zero(dim);
      double uh = 0.0;
      for (int k = 0; k <= dim; ++k) {
        x += q.bary[k] * mesh.node(cell[k]);
        uh += q.bary[k] * u_h[cell[k]];
      }
      const double w = q.weight * mesh.volume(c);
      const double du = std::abs(uh - mc.u(x));
      l2 += w * du * du;
      lp += w * std::pow(du, p);
      gp += w * std::pow((gh - mc.grad(x)).norm(), p);
    }
  }
  ErrorNorms out;
  out.l2 = std::sqrt(l2);
  out.lp = std::pow(lp, 1.0 / p);
  out.grad_lp = std::pow(gp, 1.0 / p);
  out.w1p = std::pow(lp + gp, 1.0 / p);
  return out;
}

ProblemSpec manufactured_problem(std::shared_ptr<const Mesh> mesh, const ManufacturedCase& mc,
                                 std::vector<double> eps_schedule)
{
  require(mesh->dim() == mc.dim, "manufactured_problem: dimension mismatch");
  ProblemSpec spec;
  spec.norm = AnisotropicNorm::euclidean(mc.dim);
  spec.p = mc.p;
  spec.source = mc.source;
  spec.boundary = sample_nodes(*mesh, mc.u);
  spec.eps_schedule = std::move(eps_schedule);
  spec.name = mc.name;
  spec.mesh = std::move(mesh);
  spec.validate();
  return spec;
}

}  // namespace plap
