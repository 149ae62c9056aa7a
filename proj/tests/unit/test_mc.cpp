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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "critcast/ensemble.hpp"
#include "critcast/errors.hpp"
#include "critcast/fluid.hpp"
#include "critcast/mc.hpp"
#include "critcast/paging.hpp"
#include "test_support.hpp"

namespace critcast {
namespace {

using testing::make_config;

McTrace replicate(const ScenarioConfig& config, std::uint64_t seed) {
  const DerivedQuantities derived = derive(config);
  return run_replication(config, derived, build_plan(config, derived), seed);
}

TEST(McTest, SingleDeviceConnectsAfterThePipeline) {
  const ScenarioConfig config = make_config(Scheme::kNeGP, 1);
  const DerivedQuantities derived = derive(config);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const McTrace trace = replicate(config, seed);
    ASSERT_EQ(trace.devices.size(), 1u);
    EXPECT_EQ(trace.devices[0].phase, DevicePhase::kConnected);
    EXPECT_EQ(trace.devices[0].done_vf, 1 + derived.ra_pipeline_vfs);
    std::vector<EventKind> kinds;
    for (const auto& e : trace.events) kinds.push_back(e.kind);
    EXPECT_EQ(kinds, (std::vector<EventKind>{EventKind::kPaged, EventKind::kMsg1, EventKind::kMsg2,
                                             EventKind::kMsg3, EventKind::kMsg4}));
  }
}

TEST(McTest, SinglePreambleMakesEveryAttemptCollide) {
  ScenarioConfig config = make_config(Scheme::kGP, 2);
  config.preamble_pool = 1;
  const McTrace trace = replicate(config, 7);
  EXPECT_DOUBLE_EQ(trace.access.total_failures(), 2.0);
  for (const auto& d : trace.devices) {
    EXPECT_EQ(d.phase, DevicePhase::kFailed);
    EXPECT_EQ(d.attempt, config.max_retransmissions + 1);
    const auto msg1 = std::count_if(trace.events.begin(), trace.events.end(), [&](const Event& e) {
      return e.device == d.id && e.kind == EventKind::kMsg1;
    });
    EXPECT_EQ(msg1, config.max_retransmissions);
  }
}

TEST(McTest, SameSeedSameTrace) {
  const ScenarioConfig config = make_config(Scheme::kGP, 200);
  const McTrace a = replicate(config, 42);
  const McTrace b = replicate(config, 42);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(a.devices, b.devices);
  EXPECT_EQ(a.access.msg4_success, b.access.msg4_success);
  std::ostringstream out_a;
  std::ostringstream out_b;
  write_events_csv(out_a, a);
  write_events_csv(out_b, b);
  EXPECT_EQ(out_a.str(), out_b.str());
  EXPECT_NE(a.events, replicate(config, 43).events);
}

TEST(McTest, HeaderNamesTheGenerator) {
  const McTrace trace = replicate(make_config(Scheme::kNeGP, 1), 5);
  std::ostringstream out;
  write_events_csv(out, trace);
  EXPECT_EQ(out.str().rfind("# critcast-mc-events v1 rng=mt19937_64", 0), 0u);
  EXPECT_NE(out.str().find("seed=5"), std::string::npos);
}

TEST(McTest, LedgersStayWithinBudgets) {
  for (const Scheme scheme : kAllSchemes) {
    const ScenarioConfig config = make_config(scheme, 500);
    const DerivedQuantities derived = derive(config);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const McTrace trace = replicate(config, seed);
      for (std::size_t v = 0; v < trace.access.vfs.size(); ++v) {
        const VfLedger& l = trace.access.vfs[v];
        EXPECT_LE(l.msg3_rbs, l.ul_available);
        EXPECT_LE(l.msg4_rbs, l.dl_available);
        EXPECT_LE(l.rar_grants, static_cast<double>(derived.rar_capacity));
        const auto& usage = trace.preamble_usage[v];
        EXPECT_EQ(std::accumulate(usage.begin(), usage.end(), 0), static_cast<int>(l.contenders));
      }
      for (const auto& d : trace.devices) {
        EXPECT_TRUE(d.phase == DevicePhase::kConnected || d.phase == DevicePhase::kFailed);
        EXPECT_LE(d.attempt, config.max_retransmissions + 1);
      }
      EXPECT_DOUBLE_EQ(trace.access.total_success() + trace.access.total_failures(), 500.0);
    }
  }
}

TEST(McTest, MatchesFluidWhenCollisionsAreNegligible) {
  ScenarioConfig config = make_config(Scheme::kGP, 4);
  config.preamble_pool = 10'000;
  const DerivedQuantities derived = derive(config);
  const PagingPlan plan = build_plan(config, derived);
  const FluidTrace fluid = run_fluid(config, derived, plan);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const McTrace trace = run_replication(config, derived, plan, seed);
    ASSERT_LE(trace.access.msg4_success.size(), fluid.access.msg4_success.size());
    for (std::size_t v = 0; v < trace.access.msg4_success.size(); ++v) {
      EXPECT_DOUBLE_EQ(trace.access.msg4_success[v][0],
                       std::round(fluid.access.msg4_success[v][0]))
          << "seed " << seed << " VF " << v + 1;
    }
  }
}

TEST(EnsembleTest, SingleReplicationHasZeroWidth) {
  const ScenarioConfig config = make_config(Scheme::kSP, 50);
  const DerivedQuantities derived = derive(config);
  EnsembleOptions options;
  options.num_reps = 1;
  options.base_seed = 9;
  const EnsembleResult result = run_ensemble(config, derived, build_plan(config, derived), options);
  ASSERT_EQ(result.reports.size(), 1u);
  const auto values = result.reports[0].values();
  for (std::size_t m = 0; m < values.size(); ++m) {
    EXPECT_DOUBLE_EQ(result.summary[m].mean, values[m]);
    EXPECT_DOUBLE_EQ(result.summary[m].ci_half_width, 0.0);
  }
}

TEST(EnsembleTest, NegpNeverFails) {
  const ScenarioConfig config = make_config(Scheme::kNeGP, 300);
  const DerivedQuantities derived = derive(config);
  EnsembleOptions options;
  options.num_reps = 100;
  const EnsembleResult result = run_ensemble(config, derived, build_plan(config, derived), options);
  EXPECT_DOUBLE_EQ(result.summary[0].mean, 1.0);
  EXPECT_DOUBLE_EQ(result.summary[0].ci_half_width, 0.0);
}

TEST(EnsembleTest, ThreadCountDoesNotChangeResults) {
  const ScenarioConfig config = make_config(Scheme::kGP, 300);
  const DerivedQuantities derived = derive(config);
  const PagingPlan plan = build_plan(config, derived);
  EnsembleOptions options;
  options.num_reps = 16;
  options.threads = 1;
  const EnsembleResult serial = run_ensemble(config, derived, plan, options);
  options.threads = 4;
  const EnsembleResult parallel = run_ensemble(config, derived, plan, options);
  for (std::size_t rep = 0; rep < 16; ++rep) {
    EXPECT_EQ(serial.reports[rep].values(), parallel.reports[rep].values());
  }
}

TEST(EnsembleTest, SummaryIgnoresUndefinedSamples) {
  const std::vector<double> samples = {1.0, std::nan(""), 3.0};
  const MetricSummary s = summarize(samples);
  EXPECT_EQ(s.samples, 2u);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_NEAR(s.ci_half_width, 1.96 * std::sqrt(2.0) / std::sqrt(2.0), 1e-12);
}

TEST(EnsembleTest, RejectsZeroReplications) {
  const ScenarioConfig config = make_config(Scheme::kGP, 3);
  const DerivedQuantities derived = derive(config);
  EnsembleOptions options;
  options.num_reps = 0;
  EXPECT_THROW(run_ensemble(config, derived, build_plan(config, derived), options), Error);
}

}  // namespace
}  // namespace critcast
