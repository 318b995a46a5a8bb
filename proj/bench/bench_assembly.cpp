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

// Serial vs OpenMP assembly on the structured square mesh.
// Run: bench_assembly --benchmark_filter=Residual

#include "plap/kernels.hpp"
#include "plap/regularized_operator.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace plap;

struct Setup {
  std::shared_ptr<const Mesh> mesh;
  std::vector<double> v;
  RegularizedOperator op{AnisotropicNorm::weighted({1.0, 3.0}), 3.0, 0.05};

  explicit Setup(int n)
  {
    mesh = std::make_shared<const Mesh>(Mesh::structured({Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)}, {n, n}));
    v = sample_nodes(*mesh, [](const Vec& x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]); });
  }
};

Backend backend_of(const benchmark::State& state) { return state.range(1) ? Backend::OpenMP : Backend::Serial; }

void label(benchmark::State& state, const Setup& s)
{
  state.SetLabel(state.range(1) ? "openmp" : "serial");
  state.counters["cells"] = static_cast<double>(s.mesh->num_cells());
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.mesh->num_cells()));
}

void Energy(benchmark::State& state)
{
  const Setup s(static_cast<int>(state.range(0)));
  const Assembler a(s.mesh, backend_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(a.gradient_energy(s.op, s.v));
  label(state, s);
}

void Residual(benchmark::State& state)
{
  const Setup s(static_cast<int>(state.range(0)));
  const Assembler a(s.mesh, backend_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(a.stress_residual(s.op, s.v));
  label(state, s);
}

void Hessian(benchmark::State& state)
{
  const Setup s(static_cast<int>(state.range(0)));
  const Assembler a(s.mesh, backend_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(a.hessian(s.op, s.v).nonZeros());
  label(state, s);
}

void args(benchmark::internal::Benchmark* b)
{
  for (int n : {64, 256, 512})
    for (int omp : {0, 1}) b->Args({n, omp});
  b->Unit(benchmark::kMicrosecond);
}

BENCHMARK(Energy)->Apply(args);
BENCHMARK(Residual)->Apply(args);
BENCHMARK(Hessian)->Apply(args);

}  // namespace

BENCHMARK_MAIN();
