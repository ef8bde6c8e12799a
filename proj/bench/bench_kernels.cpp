// Copyright 2026 The ctoqw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include <vector>

#include "ctoqw/fixtures.hpp"
#include "ctoqw/lattice.hpp"
#include "ctoqw/trajectory.hpp"

using namespace ctoqw;

namespace {

void block_generator(benchmark::State& state, Execution exec) {
  const BlockGenerator gen(fixtures::three_level(0.0), static_cast<int>(state.range(0)));
  const auto n = static_cast<std::size_t>(gen.state_size());
  std::vector<cplx> in(n, cplx(1e-3, 0.0)), out(n);
  for (auto _ : state) {
    gen.apply(in, out, exec);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * gen.n_sites());
}

void drift_estimate(benchmark::State& state, Execution exec) {
  const Coin coin = fixtures::three_level(0.0);
  const DensityMatrix rho = DensityMatrix::maximally_mixed(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_drift(coin, rho, 100.0, state.range(0), 1, exec).mean);
  }
}

void evolve_lattice(benchmark::State& state, Execution exec) {
  const BlockGenerator gen(fixtures::three_level(0.0), 200);
  IntegratorOptions opts;
  opts.exec = exec;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(gen, DensityMatrix::maximally_mixed(3), 0, 5.0, opts).leaked_mass);
  }
}

}  // namespace

BENCHMARK_CAPTURE(block_generator, serial, Execution::Serial)->Arg(100)->Arg(1000)->Arg(10000);
BENCHMARK_CAPTURE(block_generator, parallel, Execution::Parallel)->Arg(100)->Arg(1000)->Arg(10000);
BENCHMARK_CAPTURE(evolve_lattice, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(evolve_lattice, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(drift_estimate, serial, Execution::Serial)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(drift_estimate, parallel, Execution::Parallel)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
