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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "critcast/config.hpp"
#include "critcast/metrics.hpp"
#include "critcast/paging.hpp"

namespace critcast {

struct MetricSummary {
  double mean = 0.0;
  double ci_half_width = 0.0;  // 95%, normal approximation
  std::size_t samples = 0;     // replications where the metric was defined
};

/// Mean and 95% half-width of the defined (non-NaN) samples.
MetricSummary summarize(std::span<const double> samples);

struct EnsembleOptions {
  std::int64_t num_reps = 100;
  std::uint64_t base_seed = 1;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Utilization horizon shared with other runs of the same experiment.
  std::optional<std::int64_t> horizon;
};

struct EnsembleResult {
  std::vector<MetricsReport> reports;     // in replication order
  std::array<MetricSummary, 10> summary;  // kMetricNames order
  std::vector<double> failures;           // per replication
};

/// Runs independent replications with seeds base_seed + rep. Results do
/// not depend on the number of threads.
EnsembleResult run_ensemble(const ScenarioConfig& config, const DerivedQuantities& derived,
                            const PagingPlan& plan, const EnsembleOptions& options);

}  // namespace critcast
