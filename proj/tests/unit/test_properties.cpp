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


// Randomized checks over configurations and seeds: no VF spends more than
// its budgets and every paged device is accounted for, in both engines.

#include <gtest/gtest.h>

#include <random>

#include "critcast/errors.hpp"
#include "critcast/fluid.hpp"
#include "critcast/mc.hpp"
#include "critcast/paging.hpp"
#include "critcast/scptm.hpp"

namespace critcast {
namespace {

ScenarioConfig random_config(std::mt19937_64& gen) {
  auto integer = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen);
  };
  ScenarioConfig c;
  c.scheme = kAllSchemes[static_cast<std::size_t>(integer(0, 3))];
  c.num_devices = integer(0, 300);
  c.preamble_pool = integer(1, 64);
  c.max_retransmissions = integer(1, 12);
  c.rao_per_frame = integer(1, 3);
  c.backoff_window = static_cast<double>(integer(1, 40));
  c.contention_resolution_window = static_cast<double>(integer(1, 60));
  c.ul_budget_per_vf = static_cast<double>(integer(2, 20));
  c.prach_cost = static_cast<double>(integer(0, static_cast<std::int64_t>(c.ul_budget_per_vf) - 1));
  c.dl_budget_per_vf = static_cast<double>(integer(2, 20));
  c.rar_cost = static_cast<double>(integer(0, static_cast<std::int64_t>(c.dl_budget_per_vf) - 1));
  c.rar_overhead_fraction = static_cast<double>(integer(0, 8)) / 10.0;
  c.multicast_payload = static_cast<double>(integer(1, 40));
  c.critical_interval = integer(1, 10);
  c.sp_group_size = integer(1, 20);
  c.egp_group_size = integer(1, 40);
  c.seed = static_cast<std::uint64_t>(integer(0, 1'000'000));
  return c;
}

void check_budgets(const AccessRecord& access, const PtmSchedule& ptm, const ScenarioConfig& c,
                   const DerivedQuantities& d) {
  for (std::int64_t v = 1; v <= access.num_vfs(); ++v) {
    const VfLedger& l = access.vfs[static_cast<std::size_t>(v - 1)];
    EXPECT_LE(l.msg3_rbs + c.prach_cost, c.ul_budget_per_vf + 1e-9) << "VF " << v;
    const double rar = l.rar_sent ? c.rar_cost : 0.0;
    EXPECT_LE(rar + l.msg4_rbs + ptm.rbs_at(v), c.dl_budget_per_vf + 1e-9) << "VF " << v;
    EXPECT_LE(l.rar_grants, static_cast<double>(d.rar_capacity) + 1e-9) << "VF " << v;
  }
}

TEST(PropertyTest, LedgersAndConservationOverRandomScenarios) {
  std::mt19937_64 gen(0xC0FFEE);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    ScenarioConfig config = random_config(gen);
    try {
      config = validate(config);
    } catch (const InvalidParameter&) {
      continue;
    }
    SCOPED_TRACE(to_json(config, -1));
    const DerivedQuantities derived = derive(config);
    const PagingPlan plan = build_plan(config, derived);
    const auto n = static_cast<double>(config.num_devices);

    const FluidTrace fluid = run_fluid(config, derived, plan);
    check_budgets(fluid.access, schedule(fluid.access, config, derived), config, derived);
    EXPECT_NEAR(fluid.access.total_success() + fluid.access.total_failures(), n, 1e-6);

    const McTrace mc = run_replication(config, derived, plan, config.seed);
    check_budgets(mc.access, schedule(mc.access, config, derived), config, derived);
    EXPECT_DOUBLE_EQ(mc.access.total_success() + mc.access.total_failures(), n);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

}  // namespace
}  // namespace critcast
