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

#include "plap/norms.hpp"

#include "plap/regularized_operator.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace plap {

namespace {

constexpr int kDualGridDirections2d = 720;
constexpr int kDualIcosphereLevel = 3;  // 1280 faces, 642 vertices
constexpr int kDualAscentIterations = 20;
constexpr int kDualNewtonIterations = 30;

Vec unit_from_angle(double theta)
{
  Vec d(2);
  d << std::cos(theta), std::sin(theta);
  return d;
}

// Orthonormal basis of the tangent plane of S^2 at d.
std::pair<Vec, Vec> tangent_basis(const Vec& d)
{
  Eigen::Vector3d n(d(0), d(1), d(2));
  Eigen::Vector3d helper = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  Eigen::Vector3d t1 = n.cross(helper).normalized();
  Eigen::Vector3d t2 = n.cross(t1);
  Vec a(3), b(3);
  a << t1.x(), t1.y(), t1.z();
  b << t2.x(), t2.y(), t2.z();
  return {a, b};
}

const std::vector<Vec>& dual_search_directions(int dim)
{
  static const std::vector<Vec> dirs2 = [] {
    std::vector<Vec> out;
    out.reserve(kDualGridDirections2d);
    for (int k = 0; k < kDualGridDirections2d; ++k) {
      out.push_back(unit_from_angle(2.0 * std::numbers::pi * k / kDualGridDirections2d));
    }
    return out;
  }();
  static const std::vector<Vec> dirs3 = icosphere_vertices(kDualIcosphereLevel);
  return dim == 2 ? dirs2 : dirs3;
}

// Sampled sup over the unit sphere of a 0-homogeneous quantity.
template <typename F>
double sampled_sphere_max(int dim, F&& fn)
{
  double best = 0.0;
  for (const Vec& d : sphere_directions(dim, dim == 2 ? 4096 : 8192, 0)) best = std::max(best, fn(d));
  return best;
}

}  // namespace

std::string to_string(NormFamily family)
{
  switch (family) {
    case NormFamily::Euclidean: return "euclidean";
    case NormFamily::WeightedEuclidean: return "weighted";
    case NormFamily::PowerCombination: return "power";
  }
  return "unknown";
}

AnisotropicNorm AnisotropicNorm::euclidean(int dim)
{
  require(dim == 2 || dim == 3, "AnisotropicNorm: dimension must be 2 or 3");
  AnisotropicNorm h;
  h.family_ = NormFamily::Euclidean;
  h.dim_ = dim;
  h.finalize_constants();
  return h;
}

AnisotropicNorm AnisotropicNorm::weighted(std::vector<double> weights)
{
  require(weights.size() == 2 || weights.size() == 3, "AnisotropicNorm: dimension must be 2 or 3");
  for (double w : weights) {
    require(std::isfinite(w) && w > 0.0, "AnisotropicNorm: weights must be positive");
  }
  AnisotropicNorm h;
  h.family_ = NormFamily::WeightedEuclidean;
  h.dim_ = static_cast<int>(weights.size());
  h.weights_ = std::move(weights);
  h.finalize_constants();
  return h;
}

AnisotropicNorm AnisotropicNorm::power_combination(const AnisotropicNorm& sharp,
                                                   const AnisotropicNorm& star, double a, double b,
                                                   double exponent)
{
  require(sharp.dim() == star.dim(), "AnisotropicNorm: base norms must share a dimension");
  require(a > 0.0 && b > 0.0, "AnisotropicNorm: combination weights must be positive");
  require(exponent >= 1.0, "AnisotropicNorm: combination exponent must be >= 1");
  AnisotropicNorm h;
  h.family_ = NormFamily::PowerCombination;
  h.dim_ = sharp.dim();
  h.sharp_ = std::make_shared<const AnisotropicNorm>(sharp);
  h.star_ = std::make_shared<const AnisotropicNorm>(star);
  h.a_ = a;
  h.b_ = b;
  h.q_ = exponent;
  h.finalize_constants();
  return h;
}

void AnisotropicNorm::finalize_constants()
{
  switch (family_) {
    case NormFamily::Euclidean:
      alpha_ = 1.0;
      grad_bound_ = 1.0;
      origin_hess_ = Mat::Identity(dim_, dim_);
      break;
    case NormFamily::WeightedEuclidean: {
      const auto [wmin, wmax] = std::minmax_element(weights_.begin(), weights_.end());
      alpha_ = 1.0 / std::sqrt(*wmin);
      grad_bound_ = std::sqrt(*wmax);
      origin_hess_ = Mat::Zero(dim_, dim_);
      for (int i = 0; i < dim_; ++i) origin_hess_(i, i) = weights_[i];
      break;
    }
    case NormFamily::PowerCombination: {
      alpha_ = 1.01 * sampled_sphere_max(dim_, [this](const Vec& d) { return 1.0 / eval(d); });
      grad_bound_ = 1.01 * sampled_sphere_max(dim_, [this](const Vec& d) { return grad(d).norm(); });
      origin_hess_ = Mat::Zero(dim_, dim_);
      for (int i = 0; i < dim_; ++i) origin_hess_ += half_square_hessian(Vec::Unit(dim_, i));
      origin_hess_ /= dim_;
      break;
    }
  }
}

std::string AnisotropicNorm::describe() const
{
  std::ostringstream os;
  os << to_string(family_);
  if (family_ == NormFamily::WeightedEuclidean) {
    os << "(";
    for (std::size_t i = 0; i < weights_.size(); ++i) os << (i ? ";" : "") << weights_[i];
    os << ")";
  } else if (family_ == NormFamily::PowerCombination) {
    os << "(" << sharp_->describe() << ";" << star_->describe() << ";a=" << a_ << ";b=" << b_
       << ";q=" << q_ << ")";
  }
  return os.str();
}

double AnisotropicNorm::eval(const Vec& xi) const
{
  require_dim(xi, dim_, "norm_eval");
  switch (family_) {
    case NormFamily::Euclidean: return xi.norm();
    case NormFamily::WeightedEuclidean: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += weights_[i] * xi(i) * xi(i);
      return std::sqrt(s);
    }
    case NormFamily::PowerCombination: {
      const double h1 = sharp_->eval(xi);
      const double h2 = star_->eval(xi);
      if (h1 == 0.0 && h2 == 0.0) return 0.0;
      // Scale before powering to avoid overflow for large q.
      const double m = std::max(h1, h2);
      return m * std::pow(a_ * std::pow(h1 / m, q_) + b_ * std::pow(h2 / m, q_), 1.0 / q_);
    }
  }
  return 0.0;
}

Vec AnisotropicNorm::grad(const Vec& xi) const
{
  require_dim(xi, dim_, "norm_grad");
  const double h = eval(xi);
  if (h == 0.0) throw std::domain_error("norm_grad: gradient undefined at xi = 0");
  switch (family_) {
    case NormFamily::Euclidean: return xi / h;
    case NormFamily::WeightedEuclidean: {
      Vec g(dim_);
      for (int i = 0; i < dim_; ++i) g(i) = weights_[i] * xi(i) / h;
      return g;
    }
    case NormFamily::PowerCombination: {
      // grad H = H^(1-q) (a H1^(q-1) grad H1 + b H2^(q-1) grad H2)
      const double h1 = sharp_->eval(xi);
      const double h2 = star_->eval(xi);
      return a_ * std::pow(h1 / h, q_ - 1.0) * sharp_->grad(xi) +
             b_ * std::pow(h2 / h, q_ - 1.0) * star_->grad(xi);
    }
  }
  return Vec::Zero(dim_);
}

Mat AnisotropicNorm::hess(const Vec& xi) const
{
  require_dim(xi, dim_, "norm_hess");
  const double h = eval(xi);
  if (h == 0.0) throw std::domain_error("norm_hess: Hessian undefined at xi = 0");
  switch (family_) {
    case NormFamily::Euclidean: {
      const Vec e = xi / h;
      return (Mat::Identity(dim_, dim_) - e * e.transpose()) / h;
    }
    case NormFamily::WeightedEuclidean: {
      const Vec g = grad(xi);
      Mat w = Mat::Zero(dim_, dim_);
      for (int i = 0; i < dim_; ++i) w(i, i) = weights_[i];
      return (w - g * g.transpose()) / h;
    }
    case NormFamily::PowerCombination: {
      // With S = a H1^(q-1) grad H1 + b H2^(q-1) grad H2 = H^(q-1) grad H:
      //   D^2 H = H^(1-q) DS + (1-q) grad H grad H^T / H
      const double h1 = sharp_->eval(xi);
      const double h2 = star_->eval(xi);
      const Vec g1 = sharp_->grad(xi);
      const Vec g2 = star_->grad(xi);
      const double r1 = h1 / h;
      const double r2 = h2 / h;
      // H^(1-q) DS, term by term, with the powers of H folded into ratios.
      const Mat ds = a_ * ((q_ - 1.0) * std::pow(r1, q_ - 2.0) / h * (g1 * g1.transpose()) +
                           std::pow(r1, q_ - 1.0) * sharp_->hess(xi)) +
                     b_ * ((q_ - 1.0) * std::pow(r2, q_ - 2.0) / h * (g2 * g2.transpose()) +
                           std::pow(r2, q_ - 1.0) * star_->hess(xi));
      const Vec g = grad(xi);
      Mat out = ds + (1.0 - q_) / h * (g * g.transpose());
      return 0.5 * (out + out.transpose());
    }
  }
  return Mat::Zero(dim_, dim_);
}

Mat AnisotropicNorm::half_square_hessian(const Vec& xi) const
{
  const Vec g = grad(xi);
  return eval(xi) * hess(xi) + g * g.transpose();
}

double AnisotropicNorm::dual(const Vec& x) const
{
  require_dim(x, dim_, "dual_eval");
  switch (family_) {
    case NormFamily::Euclidean: return x.norm();
    case NormFamily::WeightedEuclidean: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += x(i) * x(i) / weights_[i];
      return std::sqrt(s);
    }
    case NormFamily::PowerCombination: return dual_by_search(x);
  }
  return 0.0;
}

double AnisotropicNorm::dual_by_search(const Vec& x) const
{
  if (x.squaredNorm() == 0.0) return 0.0;
  auto value = [&](const Vec& d) { return x.dot(d) / eval(d); };

  const auto& dirs = dual_search_directions(dim_);
  std::size_t best_k = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const double v = value(dirs[k]);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }

  Vec d;
  if (dim_ == 2) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(best_k) / kDualGridDirections2d;
    double step = 2.0 * std::numbers::pi / kDualGridDirections2d;
    for (int it = 0; it < kDualAscentIterations; ++it) {
      for (double cand : {theta - step, theta + step}) {
        const double v = value(unit_from_angle(cand));
        if (v > best) {
          best = v;
          theta = cand;
        }
      }
      step *= 0.5;
    }
    d = unit_from_angle(theta);
  } else {
    d = dirs[best_k];
    double step = 0.2;  // about the icosphere edge length at level 3
    for (int it = 0; it < kDualAscentIterations; ++it) {
      const auto [t1, t2] = tangent_basis(d);
      Vec best_d = d;
      for (const Vec& t : {t1, t2}) {
        for (double s : {-step, step}) {
          const Vec cand = (d + s * t).normalized();
          const double v = value(cand);
          if (v > best) {
            best = v;
            best_d = cand;
          }
        }
      }
      d = best_d;
      step *= 0.5;
    }
  }

  // Polish: the maximizer solves H grad H(xi) = x, the minimizer of the
  // strictly convex H^2/2 - x.xi, and there H0(x) = H(xi).
  auto phi = [&](const Vec& xi) { return 0.5 * std::pow(eval(xi), 2) - x.dot(xi); };
  Vec xi = best * d;
  for (int it = 0; it < kDualNewtonIterations; ++it) {
    const Vec g = eval(xi) * grad(xi) - x;
    if (g.norm() <= 1e-15 * x.norm()) break;
    const Vec step = -half_square_hessian(xi).ldlt().solve(g);
    double t = 1.0;
    const double f0 = phi(xi);
    while (t > 1e-12 && !(phi(xi + t * step) <= f0)) t *= 0.5;
    if (t <= 1e-12) break;
    xi += t * step;
  }
  if (xi.squaredNorm() > 0.0) best = std::max(best, value(xi));
  return best;
}

std::vector<Vec> icosphere_vertices(int subdivisions)
{
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
      {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int i, int j) {
      const auto key = std::minmax(i, j);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      verts.push_back((verts[i] + verts[j]).normalized());
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int a = mid(f[0], f[1]);
      const int b = mid(f[1], f[2]);
      const int c = mid(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }
  std::vector<Vec> out;
  out.reserve(verts.size());
  for (const auto& v : verts) {
    Vec d(3);
    d << v.x(), v.y(), v.z();
    out.push_back(d);
  }
  return out;
}

std::vector<Vec> sphere_directions(int dim, std::size_t count, std::uint64_t seed)
{
  require(dim == 2 || dim == 3, "sphere_directions: dimension must be 2 or 3");
  require(count > 0, "sphere_directions: count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(count);
  if (dim == 2) {
    const double shift = seed == 0 ? 0.5 : unif(rng);
    for (std::size_t k = 0; k < count; ++k) {
      out.push_back(unit_from_angle(2.0 * std::numbers::pi * (static_cast<double>(k) + shift) /
                                    static_cast<double>(count)));
    }
    return out;
  }
  Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
  if (seed != 0) {
    Eigen::Quaterniond q(unif(rng) - 0.5, unif(rng) - 0.5, unif(rng) - 0.5, unif(rng) - 0.5);
    rot = q.normalized().toRotationMatrix();
  }
  // Fibonacci lattice.
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < count; ++k) {
    const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(k);
    Eigen::Vector3d v = rot * Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z);
    Vec d(3);
    d << v.x(), v.y(), v.z();
    out.push_back(d);
  }
  return out;
}

double verify_dual_identity(const AnisotropicNorm& H, std::span<const Vec> samples)
{
  require(!samples.empty(), "verify_dual_identity: empty sample list");
  double worst = 0.0;
  for (const Vec& xi : samples) {
    if (xi.squaredNorm() == 0.0) throw std::domain_error("verify_dual_identity: zero sample");
    worst = std::max(worst, std::abs(H.dual(H.grad(xi)) - 1.0));
  }
  return worst;
}

namespace {

struct QuotientRange {
  double min_eig;
  double max_eig;
  double entry_sum;
};

QuotientRange quotient_at(const RegularizedOperator& op, const Vec& xi)
{
  const double p = op.p();
  const double eps = op.eps();
  const double w = std::pow(eps * eps + xi.squaredNorm(), 0.5 * (p - 2.0));
  const Mat a = op.jacobian(xi) / w;
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff(), a.cwiseAbs().sum()};
}

// Quotient on the unit sphere at ratio rho = eps/|xi|. rho = +inf is the
// limit D^2(H^2/2); the (p-2) term and the weight both drop out there.
QuotientRange quotient_at_ratio(const AnisotropicNorm& H, double p, const Vec& d, double rho)
{
  if (std::isinf(rho)) {
    const Mat a = H.half_square_hessian(d);
    Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff(), a.cwiseAbs().sum()};
  }
  return quotient_at(RegularizedOperator(H, p, rho), d);
}

void validate_ellipticity_args(double p, double eps)
{
  require(p > 1.0, "estimate_ellipticity: p must be > 1");
  require(eps >= 0.0, "estimate_ellipticity: eps must be >= 0");
}

}  // namespace

EllipticityConstants estimate_ellipticity(const AnisotropicNorm& H, double p, double eps,
                                          std::span<const Vec> samples)
{
  validate_ellipticity_args(p, eps);
  require(!samples.empty(), "estimate_ellipticity: empty sample list");
  const RegularizedOperator op(H, p, eps);
  EllipticityConstants out;
  out.lambda = std::numeric_limits<double>::infinity();
  out.Lambda = 0.0;
  for (const Vec& xi : samples) {
    if (xi.squaredNorm() == 0.0) throw std::domain_error("estimate_ellipticity: degenerate sample");
    const QuotientRange q = quotient_at(op, xi);
    out.lambda = std::min(out.lambda, q.min_eig);
    out.Lambda = std::max(out.Lambda, q.max_eig);
    out.C_upper = std::max(out.C_upper, q.entry_sum);
  }
  out.c_lower = out.lambda;
  out.sample_count = samples.size();
  return out;
}

EllipticityConstants estimate_ellipticity(const AnisotropicNorm& H, double p, double eps,
                                          const EllipticitySampling& sampling)
{
  validate_ellipticity_args(p, eps);
  const int dim = H.dim();
  const auto dirs = sphere_directions(dim, sampling.directions, sampling.seed);

  // eps = 0: the quotient is 0-homogeneous, the unit sphere is enough.
  std::vector<double> ratios = {0.0};
  if (eps > 0.0) {
    ratios.push_back(std::numeric_limits<double>::infinity());
    const std::size_t levels = std::max<std::size_t>(sampling.ratio_levels, 2);
    for (std::size_t k = 0; k < levels; ++k) {
      ratios.push_back(std::pow(10.0, -3.0 + 6.0 * static_cast<double>(k) / (levels - 1)));
    }
  }

  struct Extremum {
    double value;
    Vec dir;
    double rho;
  };
  Extremum lo{std::numeric_limits<double>::infinity(), dirs.front(), 0.0};
  Extremum hi{-std::numeric_limits<double>::infinity(), dirs.front(), 0.0};
  double entry_max = 0.0;
  std::size_t count = 0;
  for (double rho : ratios) {
    for (const Vec& d : dirs) {
      const QuotientRange q = quotient_at_ratio(H, p, d, rho);
      ++count;
      if (q.min_eig < lo.value) lo = {q.min_eig, d, rho};
      if (q.max_eig > hi.value) hi = {q.max_eig, d, rho};
      entry_max = std::max(entry_max, q.entry_sum);
    }
  }

  // Compass refinement around each extremum over (direction, log rho).
  auto refine = [&](Extremum ex, bool minimize) {
    const double sign = minimize ? 1.0 : -1.0;
    auto objective = [&](const Vec& d, double rho) {
      const QuotientRange q = quotient_at_ratio(H, p, d, rho);
      ++count;
      entry_max = std::max(entry_max, q.entry_sum);
      return sign * (minimize ? q.min_eig : q.max_eig);
    };
    double best = sign * ex.value;
    double dir_step = dim == 2 ? 2.0 * std::numbers::pi / static_cast<double>(dirs.size())
                               : 2.0 * std::sqrt(4.0 * std::numbers::pi / static_cast<double>(dirs.size()));
    const bool interior_rho = ex.rho > 0.0 && std::isfinite(ex.rho);
    double log_step = interior_rho ? 6.0 / static_cast<double>(std::max<std::size_t>(sampling.ratio_levels, 2) - 1) : 0.0;
    for (int it = 0; it < sampling.refine_iterations; ++it) {
      std::vector<std::pair<Vec, double>> cands;
      if (dim == 2) {
        const double th = std::atan2(ex.dir(1), ex.dir(0));
        cands.emplace_back(unit_from_angle(th - dir_step), ex.rho);
        cands.emplace_back(unit_from_angle(th + dir_step), ex.rho);
      } else {
        const auto [t1, t2] = tangent_basis(ex.dir);
        for (const Vec& t : {t1, t2}) {
          cands.emplace_back((ex.dir - dir_step * t).normalized(), ex.rho);
          cands.emplace_back((ex.dir + dir_step * t).normalized(), ex.rho);
        }
      }
      if (interior_rho) {
        cands.emplace_back(ex.dir, ex.rho * std::pow(10.0, -log_step));
        cands.emplace_back(ex.dir, ex.rho * std::pow(10.0, log_step));
      }
      for (const auto& [d, rho] : cands) {
        const double v = objective(d, rho);
        if (v < best) {
          best = v;
          ex.dir = d;
          ex.rho = rho;
        }
      }
      dir_step *= 0.5;
      log_step *= 0.5;
    }
    ex.value = sign * best;
    return ex;
  };
  lo = refine(lo, true);
  hi = refine(hi, false);

  EllipticityConstants out;
  out.lambda = lo.value;
  out.Lambda = hi.value;
  out.c_lower = lo.value;
  out.C_upper = entry_max;
  out.sample_count = count;
  return out;
}

}  // namespace plap
