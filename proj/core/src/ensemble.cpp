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


#include "critcast/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "critcast/errors.hpp"
#include "critcast/mc.hpp"
#include "critcast/scptm.hpp"

namespace critcast {

MetricSummary summarize(std::span<const double> samples) {
  MetricSummary out;
  double sum = 0.0;
  for (const double x : samples) {
    if (std::isnan(x)) continue;
    sum += x;
    ++out.samples;
  }
  if (out.samples == 0) {
    out.mean = std::nan("");
    return out;
  }
  const auto n = static_cast<double>(out.samples);
  out.mean = sum / n;
  if (out.samples > 1) {
    double squares = 0.0;
    for (const double x : samples) {
      if (!std::isnan(x)) squares += (x - out.mean) * (x - out.mean);
    }
    out.ci_half_width = 1.96 * std::sqrt(squares / (n - 1.0) / n);
  }
  return out;
}

EnsembleResult run_ensemble(const ScenarioConfig& config, const DerivedQuantities& derived,
                            const PagingPlan& plan, const EnsembleOptions& options) {
  if (options.num_reps < 1) throw InvalidParameter("reps", "must be >= 1");
  const auto reps = static_cast<std::size_t>(options.num_reps);

  EnsembleResult result;
  result.reports.resize(reps);
  result.failures.resize(reps);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t rep = next++; rep < reps; rep = next++) {
      try {
        const McTrace trace = run_replication(config, derived, plan, options.base_seed + rep);
        const PtmSchedule ptm = schedule(trace.access, config, derived);
        result.reports[rep] =
            compute_metrics(trace.access, ptm, config, Provenance::kMonteCarlo, options.horizon);
        result.failures[rep] = trace.access.total_failures();
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = reps;
      }
    }
  };

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(reps)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);

  std::vector<double> column(reps);
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    for (std::size_t rep = 0; rep < reps; ++rep) column[rep] = result.reports[rep].values()[m];
    result.summary[m] = summarize(column);
  }
  return result;
}

}  // namespace critcast
