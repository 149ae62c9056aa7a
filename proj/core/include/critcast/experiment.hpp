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


#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "critcast/config.hpp"
#include "critcast/ensemble.hpp"
#include "critcast/fluid.hpp"
#include "critcast/metrics.hpp"
#include "critcast/paging.hpp"
#include "critcast/scptm.hpp"

namespace critcast {

enum class Engine { kFluid, kMonteCarlo, kBoth };

std::string_view to_string(Engine engine) noexcept;
Engine parse_engine(std::string_view name);

/// Everything one analytic run produces.
struct FluidRun {
  DerivedQuantities derived;
  PagingPlan plan;
  FluidTrace trace;
  PtmSchedule schedule;
  MetricsReport report;
};

FluidRun run_fluid_scenario(const ScenarioConfig& config,
                            std::optional<std::int64_t> horizon = std::nullopt);

/// Largest natural fluid horizon over `schemes` with everything else as in
/// `config`. Experiments comparing schemes evaluate utilization over it.
std::int64_t common_horizon(const ScenarioConfig& config, const std::vector<Scheme>& schemes);

struct ScenarioResult {
  std::optional<MetricsReport> fluid;
  std::optional<EnsembleResult> montecarlo;
};

struct RunOptions {
  Engine engine = Engine::kFluid;
  std::int64_t reps = 100;
  unsigned threads = 0;
  std::optional<std::int64_t> horizon;
};

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options);

/// One swept parameter, e.g. "N=100:500:100" or "multicast_payload=3,12,32".
struct SweepSpec {
  std::string key;
  std::vector<std::string> values;
};

SweepSpec parse_sweep(std::string_view text);

struct SweepRow {
  std::string key;
  std::string value;
  Scheme scheme = Scheme::kNeGP;
  Provenance provenance = Provenance::kAnalytic;
  std::string_view metric;
  double mean = 0.0;
  double ci_half_width = 0.0;
  std::int64_t reps = 0;  // 0 for the fluid engine
};

/// Rows ordered by sweep value, then scheme, then engine, then metric.
std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const SweepSpec& spec,
                                const std::vector<Scheme>& schemes, const RunOptions& options);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct ValidationRow {
  Scheme scheme = Scheme::kNeGP;
  std::string_view metric;
  double fluid = 0.0;
  double mc_mean = 0.0;
  double mc_ci = 0.0;
  double relative_diff = 0.0;
  bool pass = false;
};

/// Compares the fluid engine with a Monte Carlo ensemble on P_A, D_A and
/// D_Total. A metric passes if the relative difference is within
/// `tolerance` or the fluid value lies inside the ensemble's 95% interval.
std::vector<ValidationRow> run_validation(const ScenarioConfig& base,
                                          const std::vector<Scheme>& schemes,
                                          const RunOptions& options, double tolerance);

void write_validation_csv(std::ostream& out, const std::vector<ValidationRow>& rows);

}  // namespace critcast
