// Copyright 2026 The critcast Authors.
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


#include <benchmark/benchmark.h>

#include "critcast/config.hpp"
#include "critcast/fluid.hpp"
#include "critcast/mc.hpp"
#include "critcast/occupancy.hpp"
#include "critcast/paging.hpp"

namespace {

critcast::ScenarioConfig scenario(critcast::Scheme scheme, std::int64_t devices) {
  critcast::ScenarioConfig config;
  config.scheme = scheme;
  config.num_devices = devices;
  return critcast::validate(config);
}

void BM_Occupancy(benchmark::State& state) {
  const auto contenders = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(critcast::expected_used_preambles(contenders, 54));
  }
}
BENCHMARK(BM_Occupancy)->Arg(8)->Arg(54)->Arg(500);

void BM_Fluid(benchmark::State& state) {
  const auto scheme = static_cast<critcast::Scheme>(state.range(0));
  const auto config = scenario(scheme, state.range(1));
  const auto derived = critcast::derive(config);
  const auto plan = critcast::build_plan(config, derived);
  for (auto _ : state) {
    benchmark::DoNotOptimize(critcast::run_fluid(config, derived, plan));
  }
}
BENCHMARK(BM_Fluid)->ArgsProduct({{0, 1, 2, 3}, {100, 500}})->Unit(benchmark::kMillisecond);

void BM_Replication(benchmark::State& state) {
  const auto scheme = static_cast<critcast::Scheme>(state.range(0));
  const auto config = scenario(scheme, state.range(1));
  const auto derived = critcast::derive(config);
  const auto plan = critcast::build_plan(config, derived);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(critcast::run_replication(config, derived, plan, ++seed));
  }
}
BENCHMARK(BM_Replication)->ArgsProduct({{0, 1, 2, 3}, {100, 500}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
