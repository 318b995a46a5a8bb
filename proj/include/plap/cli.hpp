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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace plap::cli {

enum ExitCode : int {
  kOk = 0,
  kHardFailure = 1,  ///< a hard verification assertion failed
  kUsageError = 2,   ///< bad arguments or configuration
  kNotConverged = 3, ///< a continuation stage missed its gradient tolerance
};

struct Options {
  std::string config;
  std::string out;                    ///< overrides the config's `out`
  std::optional<std::uint64_t> seed;  ///< overrides the config's `seed`
  int threads = 0;                    ///< 0 keeps the OpenMP default
  bool dry_run = false;
  bool list = false;                  ///< verify: print the estimate registry and exit
  bool corrupt_solution = false;      ///< verify: perturb every solved field before checking
};

/// Solves every (p, resolution) instance of the config and writes
/// solve_report.csv, energy_history.csv, one nodal field dump per instance,
/// and errors.csv for the manufactured torsion case.
int cmd_solve(const Options& options, std::ostream& out, std::ostream& err);

/// Solves, runs the configured checks, writes one CSV per check plus
/// summary.csv, and returns kHardFailure if any hard assertion fails.
int cmd_verify(const Options& options, std::ostream& out, std::ostream& err);

/// Dual identity and sampled ellipticity constants for the configured norm.
int cmd_norms(const Options& options, std::ostream& out, std::ostream& err);

/// Parses `plap <solve|verify|norms> [flags]` and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace plap::cli
