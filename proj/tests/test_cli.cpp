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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace plap {
namespace {

namespace fs = std::filesystem;

RunConfig parse(const std::string& text)
{
  std::istringstream in(text);
  return parse_config(in);
}

std::string config_error(const std::string& text)
{
  try {
    parse(text).validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string read_file(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell(const std::string& cmd)
{
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / ("plap_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kSmall =
    "name = small\n"
    "mesh.resolutions = 8, 16\n"
    "solve.p = 3\n"
    "source = torsion\n"
    "boundary = torsion\n"
    "eps.schedule = 0.5, 0.25, 0.125, 0\n"
    "regions.R = 0.48\n";

TEST(Config, ParsesKeysAndComments)
{
  const RunConfig c = parse("# comment\nname = demo  # trailing\nsolve.p = 1.5, 3\ndomain.lo = 0, 0\ndomain.hi = 2, 1\n");
  EXPECT_EQ(c.name, "demo");
  EXPECT_EQ(c.p, (std::vector<double>{1.5, 3.0}));
  EXPECT_EQ(c.dim(), 2);
  EXPECT_NO_THROW(c.validate());
  std::ostringstream os;
  c.write(os);
  EXPECT_NE(os.str().find("name = demo"), std::string::npos);
  // The resolved form parses back to itself.
  std::ostringstream again;
  parse(os.str()).write(again);
  EXPECT_EQ(again.str(), os.str());
}

TEST(Config, RejectsMalformedInput)
{
  EXPECT_NE(config_error("name = a\nname = b\n").find("line 2"), std::string::npos);
  EXPECT_NE(config_error("colour = red\n").find("colour"), std::string::npos);
  EXPECT_NE(config_error("solve.p\n").find("line 1"), std::string::npos);
  EXPECT_FALSE(config_error("mesh.resolutions = 32, 16\n").empty());
  EXPECT_FALSE(config_error("solve.p = 1.5\neps.schedule = 0.5, 0\n").empty());
  EXPECT_FALSE(config_error("eps.schedule = 0.1, 0.2\n").empty());
  EXPECT_FALSE(config_error("verify.checks = nonsense\n").empty());
  EXPECT_FALSE(config_error("campanato.lambda = 2\n").empty());
  EXPECT_TRUE(config_error(kSmall).empty());
}

TEST(Config, NormFamilies)
{
  EXPECT_NO_THROW(build_norm(parse("norm.family = weighted\nnorm.weights = 1, 4\n")));
  try {
    build_norm(parse("norm.family = l1\n"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("uniformly convex"), std::string::npos);
  }
  EXPECT_THROW(build_norm(parse("norm.family = spline\n")), ConfigError);
}

TEST(Config, TorsionCaseNeedsEuclideanNorm)
{
  EXPECT_TRUE(torsion_case(parse(kSmall), 3.0).has_value());
  EXPECT_FALSE(torsion_case(parse(kSmall + "norm.family = weighted\nnorm.weights = 1, 2\n"), 3.0).has_value());
  EXPECT_FALSE(torsion_case(parse("source = torsion\nboundary = zero\n"), 3.0).has_value());
}

TEST(Config, ExpressionSources)
{
  const PointFunction f = build_source(parse("source = 1 + x * y\n"));
  Vec x(2);
  x << 0.5, 4.0;
  EXPECT_DOUBLE_EQ(f(x), 3.0);
  EXPECT_THROW(build_source(parse("source = 1 + \n")), std::exception);
}

TEST(Cli, VerifyInProcess)
{
  const fs::path dir = scratch("inproc");
  std::ofstream(dir / "small.cfg") << kSmall;
  std::ostringstream out, err;
  cli::Options opt;
  opt.config = (dir / "small.cfg").string();
  opt.out = (dir / "out").string();
  EXPECT_EQ(cli::cmd_verify(opt, out, err), cli::kOk) << err.str();
  for (const char* f : {"summary.csv", "energy_bound.csv", "critical_set.csv", "hessian_weighted.csv", "convergence.csv"})
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  EXPECT_EQ(read_file(dir / "out" / "summary.csv").rfind("estimate_id,instance,p,count,c_emp_min", 0), 0u);

  opt.corrupt_solution = true;
  opt.out = (dir / "bad").string();
  std::ostringstream err2;
  EXPECT_EQ(cli::cmd_verify(opt, out, err2), cli::kHardFailure);
  EXPECT_NE(err2.str().find("residual"), std::string::npos);
}

TEST(Cli, SolveWritesFields)
{
  const fs::path dir = scratch("solve");
  std::ofstream(dir / "small.cfg") << kSmall;
  std::ostringstream out, err;
  cli::Options opt;
  opt.config = (dir / "small.cfg").string();
  opt.out = (dir / "out").string();
  ASSERT_EQ(cli::cmd_solve(opt, out, err), cli::kOk) << err.str();
  EXPECT_TRUE(fs::exists(dir / "out" / "solve_report.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "errors.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "field_small_p3_n16.csv"));
}

TEST(Cli, NotConvergedExitCode)
{
  const fs::path dir = scratch("maxiter");
  std::ofstream(dir / "c.cfg") << kSmall << "solve.max_iter = 1\n";
  std::ostringstream out, err;
  cli::Options opt;
  opt.config = (dir / "c.cfg").string();
  opt.out = (dir / "out").string();
  EXPECT_EQ(cli::cmd_verify(opt, out, err), cli::kNotConverged);
}

TEST(Cli, ExitCodes)
{
  const std::string cli = PLAP_CLI_PATH;
  const fs::path dir = scratch("exit");
  std::ofstream(dir / "small.cfg") << kSmall;
  std::ofstream(dir / "l1.cfg") << "norm.family = l1\n";
  const std::string cfg = (dir / "small.cfg").string();
  EXPECT_EQ(shell(cli + " verify --config " + (dir / "missing.cfg").string()), 2);
  EXPECT_EQ(shell(cli + " frobnicate"), 2);
  EXPECT_EQ(shell(cli + " verify --config " + cfg + " --bogus"), 2);
  EXPECT_EQ(shell(cli + " norms --config " + (dir / "l1.cfg").string()), 2);
  EXPECT_EQ(shell(cli + " verify --list"), 0);
  EXPECT_EQ(shell(cli + " verify --config " + cfg + " --dry-run --out " + (dir / "dry").string()), 0);
  EXPECT_EQ(shell(cli + " norms --config " + cfg + " --out " + (dir / "norms").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "norms" / "norms.csv"));
}

TEST(Cli, ListPrintsRegistry)
{
  const char* argv[] = {"plap", "verify", "--list"};
  std::ostringstream out, err;
  EXPECT_EQ(cli::run(3, argv, out, err), 0);
  EXPECT_NE(out.str().find("caccioppoli\t"), std::string::npos);
  EXPECT_NE(out.str().find("campanato\t"), std::string::npos);
}

TEST(Cli, OutputIsDeterministic)
{
  const std::string cli = PLAP_CLI_PATH;
  const fs::path dir = scratch("determinism");
  std::ofstream(dir / "small.cfg") << kSmall;
  const std::string cfg = (dir / "small.cfg").string();
  ASSERT_EQ(shell(cli + " verify --config " + cfg + " --threads 1 --out " + (dir / "a").string()), 0);
  ASSERT_EQ(shell(cli + " verify --config " + cfg + " --threads 3 --out " + (dir / "b").string()), 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    EXPECT_EQ(read_file(entry.path()), read_file(dir / "b" / entry.path().filename())) << entry.path().filename();
    ++compared;
  }
  EXPECT_GT(compared, 5u);
}

TEST(Cli, ShippedConfigsValidate)
{
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(PLAP_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(load_config(entry.path().string()).validate()) << entry.path();
    ++n;
  }
  EXPECT_GE(n, 3u);
}

}  // namespace
}  // namespace plap
