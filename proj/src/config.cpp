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

#include "plap/config.hpp"

#include "plap/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace plap {
namespace {

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value)
{
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
  T v{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": '" + text + "' is not a valid number");
  return v;
}

template <class T>
std::vector<T> parse_numbers(const std::string& key, const std::string& value)
{
  std::vector<T> out;
  for (const std::string& item : split_list(value)) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

Vec parse_vec(const std::string& key, const std::string& value)
{
  const auto v = parse_numbers<double>(key, value);
  if (v.size() < 2 || v.size() > 3) throw ConfigError(key + ": expected 2 or 3 coordinates");
  Vec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

template <class T>
std::string join(const std::vector<T>& values)
{
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_same_v<T, double>)
      s += format_number(values[i]);
    else if constexpr (std::is_same_v<T, std::string>)
      s += values[i];
    else
      s += std::to_string(values[i]);
  }
  return s;
}

std::string join(const Vec& v)
{
  return join(std::vector<double>(v.data(), v.data() + v.size()));
}

bool is_preset(const std::string& s, std::initializer_list<const char*> names)
{
  return std::any_of(names.begin(), names.end(), [&](const char* n) { return s == n; });
}

PointFunction expression_function(const std::string& key, const std::string& text, int dim)
{
  try {
    const Expression e = Expression::parse(text);
    if (e.arity() > dim) throw ConfigError(key + ": expression uses a coordinate beyond dimension " + std::to_string(dim));
    return [e](const Vec& x) { return e(x); };
  } catch (const ExpressionError& err) {
    throw ConfigError(key + ": " + err.what());
  }
}

}  // namespace

void RunConfig::validate() const
{
  const int n = dim();
  if (n < 2 || n > 3 || domain.hi.size() != n) throw ConfigError("domain: lo and hi must both have 2 or 3 coordinates");
  for (int i = 0; i < n; ++i)
    if (!(domain.hi[i] > domain.lo[i])) throw ConfigError("domain: hi must exceed lo in every coordinate");
  if (resolutions.empty()) throw ConfigError("mesh.resolutions: empty list");
  for (std::size_t k = 0; k < resolutions.size(); ++k) {
    if (resolutions[k] < 1) throw ConfigError("mesh.resolutions: values must be positive");
    if (k > 0 && resolutions[k] <= resolutions[k - 1])
      throw ConfigError("mesh.resolutions: values must be strictly increasing");
  }
  for (double v : p)
    if (!(v > 1.0)) throw ConfigError("solve.p: every exponent must exceed 1");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    if (!(eps_schedule[k] >= 0.0 && eps_schedule[k] < 1.0)) throw ConfigError("eps.schedule: values must lie in [0, 1)");
    if (k > 0 && eps_schedule[k] >= eps_schedule[k - 1]) throw ConfigError("eps.schedule: values must strictly decrease");
  }
  if (!eps_schedule.empty() && eps_schedule.back() == 0.0)
    for (double v : p)
      if (v < 2.0) throw ConfigError("eps.schedule: eps = 0 needs p >= 2");
  if (torsion_center.size() != n) throw ConfigError("torsion.center: dimension does not match the domain");
  if (region_center.size() != n) throw ConfigError("regions.center: dimension does not match the domain");
  for (double r : region_radii)
    if (!(r > 0.0)) throw ConfigError("regions.R: radii must be positive");
  const auto& registry = estimate_registry();
  for (const std::string& c : checks)
    if (std::none_of(registry.begin(), registry.end(), [&](const EstimateInfo& e) { return e.id == c; }))
      throw ConfigError("verify.checks: unknown estimate id '" + c + "' (see verify --list)");
  for (std::size_t k = 1; k < critical_deltas.size(); ++k)
    if (critical_deltas[k] >= critical_deltas[k - 1]) throw ConfigError("critical.deltas: values must decrease");
  for (std::size_t k = 1; k < hessian_deltas.size(); ++k)
    if (hessian_deltas[k] <= hessian_deltas[k - 1]) throw ConfigError("hessian.deltas: values must increase");
  if (!(holder_beta > 0.0 && holder_beta <= 1.0)) throw ConfigError("holder.beta: must lie in (0, 1]");
  if (campanato_lambda && !(*campanato_lambda > n - 2 && *campanato_lambda < n))
    throw ConfigError("campanato.lambda: must lie in (n-2, n)");
  (void)build_norm(*this);
  (void)build_source(*this);
  if (!is_preset(boundary, {"zero", "torsion"})) (void)expression_function("boundary", boundary, n);
}

void RunConfig::write(std::ostream& os) const
{
  os << "name = " << name << '\n'
     << "domain.lo = " << join(domain.lo) << '\n'
     << "domain.hi = " << join(domain.hi) << '\n'
     << "mesh.resolutions = " << join(resolutions) << '\n'
     << "norm.family = " << norm_family << '\n';
  if (!norm_weights.empty()) os << "norm.weights = " << join(norm_weights) << '\n';
  if (norm_family == "power")
    os << "norm.a = " << format_number(norm_a) << '\n'
       << "norm.b = " << format_number(norm_b) << '\n'
       << "norm.p_comb = " << format_number(norm_p_comb) << '\n';
  os << "solve.p = " << join(p) << '\n'
     << "solve.grad_tol = " << format_number(grad_tol) << '\n'
     << "solve.max_iter = " << max_iter << '\n'
     << "source = " << source << '\n'
     << "boundary = " << boundary << '\n'
     << "torsion.center = " << join(torsion_center) << '\n'
     << "torsion.radius = " << format_number(torsion_radius) << '\n'
     << "eps.schedule = " << (eps_schedule.empty() ? std::string("default") : join(eps_schedule)) << '\n'
     << "regions.center = " << join(region_center) << '\n'
     << "regions.R = " << join(region_radii) << '\n'
     << "verify.checks = " << join(checks) << '\n';
  if (!critical_deltas.empty()) os << "critical.deltas = " << join(critical_deltas) << '\n';
  if (!hessian_deltas.empty()) os << "hessian.deltas = " << join(hessian_deltas) << '\n';
  os << "holder.beta = " << format_number(holder_beta) << '\n' << "holder.pairs = " << holder_pairs << '\n';
  if (campanato_lambda) os << "campanato.lambda = " << format_number(*campanato_lambda) << '\n';
  os << "seed = " << seed << '\n' << "out = " << out << '\n';
}

RunConfig parse_config(std::istream& in)
{
  std::map<std::string, std::string> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
    if (!entries.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
  }

  RunConfig cfg;
  std::optional<Vec> lo, hi, torsion_center, region_center;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"name", [&](auto&, auto& v) { cfg.name = v; }},
      {"domain.lo", [&](auto& k, auto& v) { lo = parse_vec(k, v); }},
      {"domain.hi", [&](auto& k, auto& v) { hi = parse_vec(k, v); }},
      {"mesh.resolutions", [&](auto& k, auto& v) { cfg.resolutions = parse_numbers<int>(k, v); }},
      {"norm.family", [&](auto&, auto& v) { cfg.norm_family = v; }},
      {"norm.weights", [&](auto& k, auto& v) { cfg.norm_weights = parse_numbers<double>(k, v); }},
      {"norm.a", [&](auto& k, auto& v) { cfg.norm_a = parse_number<double>(k, v); }},
      {"norm.b", [&](auto& k, auto& v) { cfg.norm_b = parse_number<double>(k, v); }},
      {"norm.p_comb", [&](auto& k, auto& v) { cfg.norm_p_comb = parse_number<double>(k, v); }},
      {"solve.p", [&](auto& k, auto& v) { cfg.p = parse_numbers<double>(k, v); }},
      {"solve.grad_tol", [&](auto& k, auto& v) { cfg.grad_tol = parse_number<double>(k, v); }},
      {"solve.max_iter", [&](auto& k, auto& v) { cfg.max_iter = parse_number<int>(k, v); }},
      {"source", [&](auto&, auto& v) { cfg.source = v; }},
      {"boundary", [&](auto&, auto& v) { cfg.boundary = v; }},
      {"torsion.center", [&](auto& k, auto& v) { torsion_center = parse_vec(k, v); }},
      {"torsion.radius", [&](auto& k, auto& v) { cfg.torsion_radius = parse_number<double>(k, v); }},
      {"eps.schedule",
       [&](auto& k, auto& v) {
         if (v != "default") cfg.eps_schedule = parse_numbers<double>(k, v);
       }},
      {"regions.center", [&](auto& k, auto& v) { region_center = parse_vec(k, v); }},
      {"regions.R", [&](auto& k, auto& v) { cfg.region_radii = parse_numbers<double>(k, v); }},
      {"verify.checks",
       [&](auto&, auto& v) {
         cfg.checks.clear();
         if (v == "all") {
           for (const auto& e : estimate_registry()) cfg.checks.push_back(e.id);
         } else {
           cfg.checks = split_list(v);
         }
       }},
      {"critical.deltas", [&](auto& k, auto& v) { cfg.critical_deltas = parse_numbers<double>(k, v); }},
      {"hessian.deltas", [&](auto& k, auto& v) { cfg.hessian_deltas = parse_numbers<double>(k, v); }},
      {"holder.beta", [&](auto& k, auto& v) { cfg.holder_beta = parse_number<double>(k, v); }},
      {"holder.pairs", [&](auto& k, auto& v) { cfg.holder_pairs = parse_number<std::size_t>(k, v); }},
      {"campanato.lambda", [&](auto& k, auto& v) { cfg.campanato_lambda = parse_number<double>(k, v); }},
      {"seed", [&](auto& k, auto& v) { cfg.seed = parse_number<std::uint64_t>(k, v); }},
      {"out", [&](auto&, auto& v) { cfg.out = v; }},
  };
  for (const auto& [key, value] : entries) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown key '" + key + "'");
    it->second(key, value);
  }

  cfg.domain.lo = lo.value_or(Vec::Constant(hi ? hi->size() : 2, -1.0));
  cfg.domain.hi = hi.value_or(Vec::Constant(cfg.domain.lo.size(), 1.0));
  const Vec mid = 0.5 * (cfg.domain.lo + cfg.domain.hi);
  cfg.torsion_center = torsion_center.value_or(mid);
  cfg.region_center = region_center.value_or(mid);
  if (cfg.region_radii.empty()) {
    const double half = 0.5 * (cfg.domain.hi - cfg.domain.lo).minCoeff();
    cfg.region_radii = {0.24 * half};
  }
  if (cfg.checks.empty())
    for (const auto& e : estimate_registry()) cfg.checks.push_back(e.id);
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

AnisotropicNorm build_norm(const RunConfig& cfg)
{
  const int n = cfg.dim();
  const std::string& f = cfg.norm_family;
  const auto weights = [&] {
    if (cfg.norm_weights.empty()) return std::vector<double>(static_cast<std::size_t>(n), 1.0);
    if (static_cast<int>(cfg.norm_weights.size()) != n) throw ConfigError("norm.weights: need one weight per coordinate");
    for (double w : cfg.norm_weights)
      if (!(w > 0.0)) throw ConfigError("norm.weights: weights must be positive");
    return cfg.norm_weights;
  };
  if (f == "euclidean") return AnisotropicNorm::euclidean(n);
  if (f == "weighted") return AnisotropicNorm::weighted(weights());
  if (f == "power") {
    if (!(cfg.norm_a > 0.0 && cfg.norm_b > 0.0 && cfg.norm_p_comb >= 1.0))
      throw ConfigError("norm: the power family needs a > 0, b > 0 and p_comb >= 1");
    return AnisotropicNorm::power_combination(AnisotropicNorm::euclidean(n), AnisotropicNorm::weighted(weights()),
                                              cfg.norm_a, cfg.norm_b, cfg.norm_p_comb);
  }
  if (is_preset(f, {"l1", "linf", "max", "taxicab", "manhattan", "sup", "chebyshev", "l_1", "l_inf", "lp"}))
    throw ConfigError("norm.family: '" + f +
                      "' is not supported: its unit ball has flat faces or corners, so it is not uniformly convex "
                      "and the regularized operator loses ellipticity; choose euclidean, weighted or power");
  throw ConfigError("norm.family: unknown family '" + f + "' (expected euclidean, weighted or power)");
}

std::optional<ManufacturedCase> torsion_case(const RunConfig& cfg, double p)
{
  if (cfg.source != "torsion" || cfg.boundary != "torsion" || cfg.norm_family != "euclidean") return std::nullopt;
  return manufactured_torsion(p, cfg.dim(), cfg.torsion_radius, cfg.torsion_center);
}

PointFunction build_source(const RunConfig& cfg)
{
  const int n = cfg.dim();
  if (cfg.source == "torsion") return [](const Vec&) { return 1.0; };
  if (cfg.source == "zero") return [](const Vec&) { return 0.0; };
  if (cfg.source == "sine") {
    const Box box = cfg.domain;
    return [box, n](const Vec& x) {
      double v = 1.0;
      for (int i = 0; i < n; ++i) v *= std::sin(std::numbers::pi * (x[i] - box.lo[i]) / (box.hi[i] - box.lo[i]));
      return v;
    };
  }
  return expression_function("source", cfg.source, n);
}

ProblemSpec build_problem(const RunConfig& cfg, double p, std::shared_ptr<const Mesh> mesh)
{
  ProblemSpec spec;
  spec.mesh = mesh;
  spec.norm = build_norm(cfg);
  spec.p = p;
  spec.source = build_source(cfg);
  if (cfg.boundary == "zero") {
    spec.boundary.assign(mesh->num_nodes(), 0.0);
  } else if (cfg.boundary == "torsion") {
    const ManufacturedCase mc = manufactured_torsion(p, cfg.dim(), cfg.torsion_radius, cfg.torsion_center);
    spec.boundary = sample_nodes(*mesh, mc.u);
  } else {
    spec.boundary = sample_nodes(*mesh, expression_function("boundary", cfg.boundary, cfg.dim()));
  }
  spec.eps_schedule = cfg.eps_schedule.empty() ? default_eps_schedule(mesh->h()) : cfg.eps_schedule;
  spec.tol.grad_tol = cfg.grad_tol;
  spec.tol.max_iter = cfg.max_iter;
  std::ostringstream name;
  name << cfg.name << "_p" << p;
  spec.name = name.str();
  spec.validate();
  return spec;
}

}  // namespace plap
