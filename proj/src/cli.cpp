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

#include "plap/cli.hpp"

#include "plap/config.hpp"
#include "plap/measures.hpp"
#include "plap/solver.hpp"
#include "plap/verify.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace plap::cli {
namespace {

namespace fs = std::filesystem;

struct Instance {
  double p = 2.0;
  int resolution = 0;
  std::shared_ptr<const Mesh> mesh;
  ProblemSpec spec;
  std::vector<SolveReport> stages;
};

RunConfig resolve(const Options& options)
{
  RunConfig cfg = load_config(options.config);
  if (!options.out.empty()) cfg.out = options.out;
  if (options.seed) cfg.seed = *options.seed;
  return cfg;
}

void apply_threads(const Options& options)
{
  if (options.threads > 0) omp_set_num_threads(options.threads);
}

std::shared_ptr<const Mesh> build_mesh(const RunConfig& cfg, int resolution)
{
  return std::make_shared<const Mesh>(Mesh::structured(cfg.domain, std::vector<int>(cfg.dim(), resolution)));
}

std::ofstream open_csv(const RunConfig& cfg, const std::string& file)
{
  fs::create_directories(cfg.out);
  std::ofstream os(fs::path(cfg.out) / file);
  if (!os) throw ConfigError("cannot write to output directory '" + cfg.out + "'");
  return os;
}

std::string instance_label(const Instance& inst)
{
  return inst.spec.name + "_n" + std::to_string(inst.resolution);
}

/// Solves every (p, resolution) pair in config order. Returns false if any stage failed.
bool solve_all(const RunConfig& cfg, std::vector<Instance>& out, std::ostream& err)
{
  bool ok = true;
  for (double p : cfg.p) {
    for (int n : cfg.resolutions) {
      Instance inst;
      inst.p = p;
      inst.resolution = n;
      inst.mesh = build_mesh(cfg, n);
      inst.spec = build_problem(cfg, p, inst.mesh);
      const Solver solver(inst.spec, Backend::OpenMP);
      inst.stages = solver.continuation_solve();
      for (const SolveReport& s : inst.stages) {
        if (!s.converged) {
          err << "plap: " << instance_label(inst) << " did not converge at eps = " << format_number(s.eps)
              << " (gradient norm " << format_number(s.gradient_history.back()) << ")\n";
          ok = false;
        }
      }
      out.push_back(std::move(inst));
    }
  }
  return ok;
}

void print_dry_run(const RunConfig& cfg, std::ostream& out)
{
  cfg.write(out);
  for (int n : cfg.resolutions) {
    const auto mesh = build_mesh(cfg, n);
    const auto schedule = cfg.eps_schedule.empty() ? default_eps_schedule(mesh->h()) : cfg.eps_schedule;
    out << "# resolution " << n << ": " << mesh->num_nodes() << " nodes, " << mesh->num_cells()
        << " cells, h = " << format_number(mesh->h()) << ", " << schedule.size() << " eps stages\n";
  }
}

double max_gradient(const Mesh& m, const std::vector<double>& u)
{
  const VectorField g = gradient(m, {Location::Node, u});
  double hi = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) hi = std::max(hi, g.at(c).norm());
  return hi;
}

std::vector<double> critical_ladder(const RunConfig& cfg, const Instance& inst, bool manufactured)
{
  if (!cfg.critical_deltas.empty()) return cfg.critical_deltas;
  std::vector<double> ladder;
  const int n = cfg.dim();
  if (manufactured) {
    // Sublevel sets are balls of radius n delta^(p-1); keep them well inside the box.
    const double r_max = 0.6 * 0.5 * (cfg.domain.hi - cfg.domain.lo).minCoeff();
    for (int k = 0; k < 6; ++k)
      ladder.push_back(std::pow(r_max * std::pow(0.7, k) / n, 1.0 / (inst.p - 1.0)));
    return ladder;
  }
  const double g = max_gradient(*inst.mesh, inst.stages.back().u);
  for (int k = 1; k <= 6; ++k) ladder.push_back(g * std::pow(0.5, k));
  return ladder;
}

std::vector<double> hessian_ladder(const RunConfig& cfg, const Instance& inst)
{
  if (!cfg.hessian_deltas.empty()) return cfg.hessian_deltas;
  const double g = max_gradient(*inst.mesh, inst.stages.back().u);
  return {1e-3 * g, 1e-2 * g, 1e-1 * g};
}

/// Last stage with eps > 0, for checks that need the regularized weight.
const SolveReport* last_positive_stage(const Instance& inst)
{
  for (auto it = inst.stages.rbegin(); it != inst.stages.rend(); ++it)
    if (it->eps > 0.0) return &*it;
  return nullptr;
}

void corrupt(std::vector<Instance>& instances)
{
  for (Instance& inst : instances) {
    for (SolveReport& s : inst.stages) {
      for (std::size_t i = 0; i < s.u.size(); ++i)
        if (!inst.mesh->is_boundary(i)) s.u[i] += 0.1 * static_cast<double>(static_cast<int>(i % 7) - 3);
    }
  }
}

struct SummaryRow {
  std::string id;
  std::string instance;
  double p = 0.0;
  std::vector<double> c_emp;
  bool hard = false;
  bool passed = true;
};

class Summary {
 public:
  void add(const std::string& id, const std::string& instance, double p, double c_emp, bool hard, bool passed)
  {
    const auto key = std::make_pair(id, instance);
    auto it = index_.find(key);
    if (it == index_.end()) {
      it = index_.emplace(key, rows_.size()).first;
      rows_.push_back({id, instance, p, {}, hard, true});
    }
    SummaryRow& row = rows_[it->second];
    row.c_emp.push_back(c_emp);
    row.hard = row.hard || hard;
    row.passed = row.passed && passed;
  }

  void add(const EstimateReport& r, const std::string& instance, double p)
  {
    add(r.id, instance, p, r.c_emp, r.hard, r.passed);
  }

  void write(std::ostream& os) const
  {
    os << "estimate_id,instance,p,count,c_emp_min,c_emp_max,c_emp_variation,hard,passed\n";
    for (const SummaryRow& row : rows_) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (double v : row.c_emp) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      os << row.id << ',' << row.instance << ',' << format_number(row.p) << ',' << row.c_emp.size() << ','
         << format_number(lo) << ',' << format_number(hi) << ',' << format_number(variation(row.c_emp)) << ','
         << (row.hard ? 1 : 0) << ',' << (row.passed ? 1 : 0) << '\n';
    }
  }

  /// Failed hard rows, in insertion order.
  [[nodiscard]] std::vector<const SummaryRow*> failures() const
  {
    std::vector<const SummaryRow*> out;
    for (const SummaryRow& row : rows_)
      if (row.hard && !row.passed) out.push_back(&row);
    return out;
  }

 private:
  std::vector<SummaryRow> rows_;
  std::map<std::pair<std::string, std::string>, std::size_t> index_;
};

struct WeightedRow {
  EstimateReport report;
  std::vector<double> deltas;
};

void write_weighted_csv(std::ostream& os, const std::vector<WeightedRow>& rows)
{
  os << "instance,estimate_id,h,eps,R,delta,lhs\n";
  for (const WeightedRow& w : rows) {
    const auto& r = w.report;
    for (std::size_t k = 0; k < w.deltas.size(); ++k)
      os << r.instance.name << ',' << r.id << ',' << format_number(r.instance.h) << ','
         << format_number(r.instance.eps) << ',' << format_number(r.instance.R) << ',' << format_number(w.deltas[k])
         << ',' << format_number(r.history[k]) << '\n';
  }
}

}  // namespace

int cmd_solve(const Options& options, std::ostream& out, std::ostream& err)
{
  const RunConfig cfg = resolve(options);
  if (options.dry_run) {
    print_dry_run(cfg, out);
    return kOk;
  }
  apply_threads(options);
  std::vector<Instance> instances;
  const bool ok = solve_all(cfg, instances, err);

  auto report = open_csv(cfg, "solve_report.csv");
  report << "instance,h,stage,eps,iterations,newton_steps,gradient_steps,energy,gradient_norm,increment,converged\n";
  auto history = open_csv(cfg, "energy_history.csv");
  history << "instance,h,stage,eps,iteration,energy,gradient_norm\n";
  std::ofstream errors;
  for (const Instance& inst : instances) {
    const std::string label = instance_label(inst);
    const std::string h = format_number(inst.mesh->h());
    for (std::size_t k = 0; k < inst.stages.size(); ++k) {
      const SolveReport& s = inst.stages[k];
      report << label << ',' << h << ',' << k << ',' << format_number(s.eps) << ',' << s.iterations << ','
             << s.newton_steps << ',' << s.gradient_steps << ',' << format_number(s.energy_history.back()) << ','
             << format_number(s.gradient_history.back()) << ',' << format_number(s.increment) << ','
             << (s.converged ? 1 : 0) << '\n';
      for (std::size_t it = 0; it < s.energy_history.size(); ++it)
        history << label << ',' << h << ',' << k << ',' << format_number(s.eps) << ',' << it << ','
                << format_number(s.energy_history[it]) << ',' << format_number(s.gradient_history[it]) << '\n';
    }
    const std::vector<double>& u = inst.stages.back().u;
    auto field = open_csv(cfg, "field_" + label + ".csv");
    if (const auto mc = torsion_case(cfg, inst.p)) {
      const std::vector<double> exact = sample_nodes(*inst.mesh, mc->u);
      write_field_csv(field, *inst.mesh, Location::Node, {"u", "u_exact"}, {&u, &exact});
      if (!errors.is_open()) {
        errors = open_csv(cfg, "errors.csv");
        errors << "instance,h,p,l2,lp,grad_lp,w1p\n";
      }
      const ErrorNorms e = error_norms(*inst.mesh, u, *mc, inst.p);
      errors << label << ',' << h << ',' << format_number(inst.p) << ',' << format_number(e.l2) << ','
             << format_number(e.lp) << ',' << format_number(e.grad_lp) << ',' << format_number(e.w1p) << '\n';
    } else {
      write_field_csv(field, *inst.mesh, Location::Node, {"u"}, {&u});
    }
    out << label << ": " << inst.stages.size() << " stages, final eps " << format_number(inst.stages.back().eps)
        << ", energy " << format_number(inst.stages.back().energy_history.back()) << '\n';
  }
  return ok ? kOk : kNotConverged;
}

int cmd_verify(const Options& options, std::ostream& out, std::ostream& err)
{
  if (options.list) {
    for (const EstimateInfo& e : estimate_registry()) out << e.id << "\t" << e.description << '\n';
    return kOk;
  }
  const RunConfig cfg = resolve(options);
  if (options.dry_run) {
    print_dry_run(cfg, out);
    return kOk;
  }
  apply_threads(options);
  std::vector<Instance> instances;
  if (!solve_all(cfg, instances, err)) return kNotConverged;
  if (options.corrupt_solution) corrupt(instances);

  const std::set<std::string> wanted(cfg.checks.begin(), cfg.checks.end());
  const auto on = [&](const char* id) { return wanted.count(id) > 0; };
  std::map<std::string, std::vector<EstimateReport>> reports;
  std::vector<WeightedRow> weighted;
  std::vector<CriticalSetTable> critical;
  std::vector<ConvergenceTable> convergence;
  Summary summary;

  for (const Instance& inst : instances) {
    const ProblemSpec& spec = inst.spec;
    const std::string label = spec.name;
    const SolveReport& final = inst.stages.back();
    const auto mc = torsion_case(cfg, inst.p);
    const auto record = [&](EstimateReport r) {
      summary.add(r, label, inst.p);
      reports[r.id].push_back(std::move(r));
    };

    for (const SolveReport& s : inst.stages) {
      if (on("energy_bound")) record(check_energy_bound(spec, s, final.u));
      if (on("residual")) record(check_residual(spec, s));
    }
    for (double R : cfg.region_radii) {
      if (on("caccioppoli")) {
        if (const SolveReport* s = last_positive_stage(inst))
          record(check_caccioppoli(spec, *s, make_cutoff(*inst.mesh, cfg.region_center, R, 2.0 * R)));
      }
      if (on("stress_h1") || on("stress_l2") || on("stress_l1") || on("stress_l2_eps") || on("stress_h1_eps"))
        for (EstimateReport& r : check_stress_estimates(spec, final, R, cfg.region_center))
          if (on(r.id.c_str())) record(std::move(r));
      if (on("hessian_h2") && inst.p <= 2.0) record(check_hessian_unweighted(spec, final, R, cfg.region_center));
      if (on("hessian_weighted")) {
        const std::vector<double> deltas = hessian_ladder(cfg, inst);
        for (const SolveReport& s : inst.stages) {
          EstimateReport r = check_hessian_weighted(spec, s, R, cfg.region_center, deltas);
          summary.add(r, label, inst.p);
          weighted.push_back({std::move(r), deltas});
        }
      }
      if (on("gradient_holder"))
        record(check_gradient_holder(spec, final, R, cfg.region_center, cfg.holder_beta, cfg.holder_pairs, cfg.seed));
    }
    if (on("critical_set")) {
      CriticalSetTable t = check_critical_set(spec, final, critical_ladder(cfg, inst, mc.has_value()),
                                              mc ? &*mc : nullptr);
      summary.add("critical_set", label, inst.p, t.fitted_exponent, true, t.monotone);
      critical.push_back(std::move(t));
    }
    if (on("convergence") && inst.stages.size() >= 4) {
      const std::span<const SolveReport> earlier(inst.stages.data(), inst.stages.size() - 1);
      ConvergenceTable t = check_convergence(spec, earlier, final.u);
      summary.add("convergence", label, inst.p, t.rows.back().w1p, false, t.w1p_decreasing && t.gap_decreasing);
      convergence.push_back(std::move(t));
    }
  }

  if (on("campanato")) {
    const PointFunction f = build_source(cfg);
    const double lambda = cfg.campanato_lambda.value_or(cfg.dim() - 0.5);
    for (int n : cfg.resolutions) {
      CampanatoOptions opts;
      opts.seed = cfg.seed;
      EstimateReport r = check_campanato_lemma(build_mesh(cfg, n), f, lambda, opts);
      r.instance.name = cfg.name + "_campanato";
      summary.add(r, r.instance.name, 2.0);
      reports["campanato"].push_back(std::move(r));
    }
  }

  for (const auto& [id, list] : reports) {
    auto os = open_csv(cfg, id + ".csv");
    write_reports_csv(os, list);
  }
  if (!weighted.empty()) {
    auto os = open_csv(cfg, "hessian_weighted.csv");
    write_weighted_csv(os, weighted);
  }
  if (!critical.empty()) {
    auto os = open_csv(cfg, "critical_set.csv");
    write_critical_set_csv(os, critical);
  }
  if (!convergence.empty()) {
    auto os = open_csv(cfg, "convergence.csv");
    write_convergence_csv(os, convergence);
  }
  auto os = open_csv(cfg, "summary.csv");
  summary.write(os);
  summary.write(out);

  const auto failed = summary.failures();
  for (const SummaryRow* row : failed)
    err << "plap: hard assertion failed: " << row->id << " on " << row->instance << '\n';
  return failed.empty() ? kOk : kHardFailure;
}

int cmd_norms(const Options& options, std::ostream& out, std::ostream&)
{
  const RunConfig cfg = resolve(options);
  if (options.dry_run) {
    print_dry_run(cfg, out);
    return kOk;
  }
  apply_threads(options);
  const AnisotropicNorm H = build_norm(cfg);
  const std::vector<Vec> dirs = sphere_directions(cfg.dim(), 2000, cfg.seed);
  const double dual_error = verify_dual_identity(H, dirs);

  auto os = open_csv(cfg, "norms.csv");
  os << "family,p,eps,lambda,Lambda,c_lower,C_upper,alpha,grad_bound,dual_identity_error,samples\n";
  out << H.describe() << "\n";
  out << "alpha = " << format_number(H.alpha()) << "\n";
  out << "dual identity max error = " << format_number(dual_error) << " over " << dirs.size() << " directions\n";
  for (double p : cfg.p) {
    for (double eps : {0.0, 0.1}) {
      EllipticitySampling sampling;
      sampling.directions = 2000;
      sampling.seed = cfg.seed;
      const EllipticityConstants k = estimate_ellipticity(H, p, eps, sampling);
      os << cfg.norm_family << ',' << format_number(p) << ',' << format_number(eps) << ','
         << format_number(k.lambda) << ',' << format_number(k.Lambda) << ',' << format_number(k.c_lower) << ','
         << format_number(k.C_upper) << ',' << format_number(H.alpha()) << ',' << format_number(H.grad_bound())
         << ',' << format_number(dual_error) << ',' << k.sample_count << '\n';
      out << "p = " << format_number(p) << ", eps = " << format_number(eps) << ": lambda = " << format_number(k.lambda)
          << ", Lambda = " << format_number(k.Lambda) << '\n';
    }
  }
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Regularized anisotropic p-Laplace solver and estimate verifier"};
  app.require_subcommand(1);
  Options options;
  const auto common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", options.config, "configuration file");
    if (config_required) c->required();
    sub->add_option("--out", options.out, "output directory (overrides the config)");
    sub->add_option("--seed", options.seed, "random seed (overrides the config)");
    sub->add_option("--threads", options.threads, "OpenMP thread count")->check(CLI::NonNegativeNumber);
    sub->add_flag("--dry-run", options.dry_run, "print the resolved instance and exit");
  };
  CLI::App* solve = app.add_subcommand("solve", "solve every configured instance");
  common(solve, true);
  CLI::App* verify = app.add_subcommand("verify", "solve and run the configured estimate checks");
  common(verify, false);
  verify->add_flag("--list", options.list, "list estimate ids and exit");
  verify->add_flag("--corrupt-solution", options.corrupt_solution,
                   "perturb the solved fields before checking (negative control)");
  CLI::App* norms = app.add_subcommand("norms", "dual identity and ellipticity constants of the configured norm");
  common(norms, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (solve->parsed()) return cmd_solve(options, out, err);
    if (verify->parsed()) {
      if (!options.list && options.config.empty()) {
        err << "plap verify: --config is required\n";
        return kUsageError;
      }
      return cmd_verify(options, out, err);
    }
    return cmd_norms(options, out, err);
  } catch (const ConfigError& e) {
    err << "plap: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "plap: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace plap::cli
