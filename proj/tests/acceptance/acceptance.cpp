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


// Acceptance report: one pass/fail line per criterion with the measured
// values behind the verdict. Exits non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "critcast/config.hpp"
#include "critcast/ensemble.hpp"
#include "critcast/errors.hpp"
#include "critcast/experiment.hpp"
#include "critcast/fluid.hpp"
#include "critcast/format.hpp"
#include "critcast/mc.hpp"
#include "critcast/metrics.hpp"
#include "critcast/occupancy.hpp"
#include "critcast/paging.hpp"
#include "critcast/rng.hpp"
#include "critcast/scptm.hpp"

namespace {

using namespace critcast;

struct Verdict {
  bool pass = false;
  std::string detail;
};

ScenarioConfig defaults(Scheme scheme, std::int64_t devices) {
  ScenarioConfig config;
  config.scheme = scheme;
  config.num_devices = devices;
  return validate(config);
}

std::string num(double x) { return format_number(std::round(x * 1e4) / 1e4); }

EnsembleResult ensemble(const ScenarioConfig& config, std::int64_t reps) {
  const DerivedQuantities derived = derive(config);
  const PagingPlan plan = build_plan(config, derived);
  EnsembleOptions options;
  options.num_reps = reps;
  options.base_seed = config.seed;
  return run_ensemble(config, derived, plan, options);
}

Verdict negp_reliability() {
  Verdict v{true, ""};
  double worst_fluid = 1.0;
  std::int64_t failing_reps = 0;
  for (std::int64_t n = 50; n <= 500; n += 50) {
    const ScenarioConfig config = defaults(Scheme::kNeGP, n);
    const double p = run_fluid_scenario(config).report.access_success_prob;
    worst_fluid = std::min(worst_fluid, p);
    const EnsembleResult mc = ensemble(config, 100);
    failing_reps += std::ranges::count_if(mc.failures, [](double f) { return f > 0.0; });
  }
  v.pass = worst_fluid == 1.0 && failing_reps == 0;
  v.detail = "min fluid P_A=" + num(worst_fluid) + ", MC replications with failures=" +
             std::to_string(failing_reps) + "/1000";
  return v;
}

Verdict failure_band() {
  Verdict v{true, ""};
  for (const Scheme s : {Scheme::kSP, Scheme::kGP}) {
    const double p = run_fluid_scenario(defaults(s, 500)).report.access_success_prob;
    v.pass = v.pass && p >= 0.87 && p <= 0.98;
    v.detail += std::string(to_string(s)) + " P_A=" + num(p) + " ";
  }
  v.detail += "(band [0.87, 0.98])";
  return v;
}

Verdict negp_gains() {
  const MetricsReport negp = run_fluid_scenario(defaults(Scheme::kNeGP, 500)).report;
  const MetricsReport egp = run_fluid_scenario(defaults(Scheme::kEGP, 500)).report;
  const double delay = negp.avg_access_delay / egp.avg_access_delay;
  const double energy = negp.avg_access_energy / egp.avg_access_energy;
  return {delay <= 0.5 && energy <= 0.5,
          "D_A ratio=" + num(delay) + " (" + num(negp.avg_access_delay) + "/" +
              num(egp.avg_access_delay) + " ms), E_A ratio=" + num(energy) + " (" +
              num(negp.avg_access_energy) + "/" + num(egp.avg_access_energy) + " mJ)"};
}

Verdict engine_agreement() {
  Verdict v{true, ""};
  RunOptions options;
  options.engine = Engine::kBoth;
  options.reps = 100;
  const std::vector<Scheme> schemes(kAllSchemes.begin(), kAllSchemes.end());
  int failed = 0;
  for (const std::int64_t n : {100, 300, 500}) {
    ScenarioConfig config = defaults(Scheme::kNeGP, n);
    for (const ValidationRow& row : run_validation(config, schemes, options, 0.05)) {
      if (row.pass) continue;
      v.pass = false;
      ++failed;
      v.detail += std::string(to_string(row.scheme)) + "@" + std::to_string(n) + " " +
                  std::string(row.metric) + " fluid=" + num(row.fluid) + " mc=" + num(row.mc_mean) +
                  "+-" + num(row.mc_ci) + "; ";
    }
  }
  v.detail = std::to_string(36 - failed) + "/36 comparisons agree" +
             (failed > 0 ? ". Outside: " + v.detail : std::string());
  return v;
}

Verdict arrival_capacity() {
  // Ten seconds of steady NeGP cadence: one group of N_RAR devices per
  // paging interval.
  ScenarioConfig config = defaults(Scheme::kNeGP, 1);
  const DerivedQuantities d = derive(config);
  const auto vfs = static_cast<std::int64_t>(std::llround(10'000.0 / config.vf_duration));
  config.num_devices = vfs / d.paging_interval_vfs * d.rar_capacity;
  config = validate(config);
  const EnsembleResult mc = ensemble(config, 100);
  const double p = mc.summary[0].mean;
  return {p >= 0.99, "N=" + std::to_string(config.num_devices) + " over " +
                         std::to_string(vfs) + " VFs, MC P_A=" + num(p) + " +- " +
                         num(mc.summary[0].ci_half_width)};
}

Verdict payload_determinism() {
  std::vector<double> diffs;
  for (std::int64_t n = 100; n <= 500; n += 100) {
    ScenarioConfig big = defaults(Scheme::kNeGP, n);
    ScenarioConfig small = big;
    big.multicast_payload = 32.0;
    small.multicast_payload = 3.0;
    diffs.push_back(run_fluid_scenario(validate(big)).report.avg_total_delay -
                    run_fluid_scenario(validate(small)).report.avg_total_delay);
  }
  const auto [lo, hi] = std::ranges::minmax(diffs);
  double mean = 0.0;
  for (const double x : diffs) mean += x / static_cast<double>(diffs.size());
  const double t_vf = ScenarioConfig{}.vf_duration;
  return {mean - lo <= t_vf && hi - mean <= t_vf,
          "D_Total difference in [" + num(lo) + ", " + num(hi) + "] ms around " + num(mean) +
              " ms (allowed +-" + num(t_vf) + ")"};
}

Verdict saturation() {
  const MetricsReport n100 = run_fluid_scenario(defaults(Scheme::kNeGP, 100)).report;
  const MetricsReport n500 = run_fluid_scenario(defaults(Scheme::kNeGP, 500)).report;
  const MetricsReport gp100 = run_fluid_scenario(defaults(Scheme::kGP, 100)).report;
  const MetricsReport gp500 = run_fluid_scenario(defaults(Scheme::kGP, 500)).report;
  const double d = n500.avg_access_delay / n100.avg_access_delay;
  const double e = n500.avg_access_energy / n100.avg_access_energy;
  const double gp = gp500.avg_access_delay / gp100.avg_access_delay;
  return {d <= 1.1 && e <= 1.1 && gp >= 2.0,
          "NeGP D_A(500)/D_A(100)=" + num(d) + ", E_A ratio=" + num(e) +
              ", GP D_A ratio=" + num(gp)};
}

// Exact occupancy law by visiting all pool^contenders preamble choices.
std::vector<double> enumerate(int contenders, int pool) {
  std::vector<double> law(static_cast<std::size_t>(pool) + 1, 0.0);
  std::vector<int> pick(static_cast<std::size_t>(contenders), 0);
  const double weight = 1.0 / std::pow(pool, contenders);
  for (;;) {
    std::vector<int> seen(static_cast<std::size_t>(pool), 0);
    int distinct = 0;
    for (const int p : pick) distinct += seen[static_cast<std::size_t>(p)]++ == 0;
    law[static_cast<std::size_t>(distinct)] += weight;
    int pos = 0;
    while (pos < contenders && ++pick[static_cast<std::size_t>(pos)] == pool) {
      pick[static_cast<std::size_t>(pos++)] = 0;
    }
    if (pos == contenders) return law;
  }
}

Verdict occupancy_oracle() {
  double worst = 0.0;
  for (int pool = 1; pool <= 4; ++pool) {
    for (int alpha = 1; alpha <= 4; ++alpha) {
      const auto exact = enumerate(alpha, pool);
      const auto q = occupancy_distribution(alpha, pool);
      for (std::size_t c = 1; c < exact.size(); ++c) {
        const double model = c <= q.size() ? q[c - 1] : 0.0;
        worst = std::max(worst, std::abs(model - exact[c]));
      }
    }
  }
  Verdict v{worst <= 1e-12, "enumeration max error=" + format_number(worst) + "; sampled z:"};

  constexpr int kSamples = 1'000'000;
  constexpr std::int64_t kPool = 54;
  Rng rng(20260901);
  std::vector<std::uint8_t> seen(kPool);
  for (const int alpha : {2, 8, 54, 200}) {
    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < kSamples; ++s) {
      std::ranges::fill(seen, 0);
      int distinct = 0;
      for (int a = 0; a < alpha; ++a) distinct += seen[rng.below(kPool)]++ == 0;
      sum += distinct;
      sum_sq += static_cast<double>(distinct) * distinct;
    }
    const double mean = sum / kSamples;
    const double se = std::sqrt((sum_sq / kSamples - mean * mean) / (kSamples - 1));
    const double z = std::abs(mean_used_preambles(alpha, kPool) - mean) / se;
    v.pass = v.pass && z <= 3.0;
    v.detail += " alpha=" + std::to_string(alpha) + " " + num(z);
  }
  return v;
}

Verdict deterministic_pipeline() {
  const ScenarioConfig config = defaults(Scheme::kNeGP, 1);
  const FluidRun fluid = run_fluid_scenario(config);
  const std::int64_t target = fluid.plan.paging_vfs.front() + fluid.derived.ra_pipeline_vfs;
  const std::int64_t fluid_done = fluid.trace.access.last_success_vf();

  auto events = [&](std::uint64_t seed) {
    const McTrace trace = run_replication(config, fluid.derived, fluid.plan, seed);
    std::ostringstream out;
    write_events_csv(out, trace);
    return std::pair{trace.devices.front().done_vf, out.str()};
  };
  const auto [mc_done, first] = events(42);
  const std::string second = events(42).second;
  return {fluid_done == target && mc_done == target && first == second && !first.empty(),
          "target VF " + std::to_string(target) + ", fluid " + std::to_string(fluid_done) +
              ", MC " + std::to_string(mc_done) + ", repeated events " +
              (first == second ? "identical" : "differ")};
}

Verdict ledger_safety() {
  std::mt19937_64 gen(7);
  auto draw = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen);
  };
  int checked = 0, violations = 0;
  for (int trial = 0; trial < 300; ++trial) {
    ScenarioConfig c;
    c.scheme = kAllSchemes[static_cast<std::size_t>(draw(0, 3))];
    c.num_devices = draw(0, 300);
    c.preamble_pool = draw(1, 64);
    c.max_retransmissions = draw(1, 12);
    c.ul_budget_per_vf = static_cast<double>(draw(2, 20));
    c.prach_cost = static_cast<double>(draw(0, static_cast<std::int64_t>(c.ul_budget_per_vf) - 1));
    c.dl_budget_per_vf = static_cast<double>(draw(2, 20));
    c.rar_cost = static_cast<double>(draw(0, static_cast<std::int64_t>(c.dl_budget_per_vf) - 1));
    c.multicast_payload = static_cast<double>(draw(1, 40));
    c.critical_interval = draw(1, 10);
    try {
      c = validate(c);
    } catch (const InvalidParameter&) {
      continue;
    }
    const DerivedQuantities d = derive(c);
    const PagingPlan plan = build_plan(c, d);
    const auto n = static_cast<double>(c.num_devices);
    auto audit = [&](const AccessRecord& access) {
      const PtmSchedule ptm = schedule(access, c, d);
      for (std::int64_t vf = 1; vf <= access.num_vfs(); ++vf) {
        const VfLedger& l = access.vfs[static_cast<std::size_t>(vf - 1)];
        const double dl = (l.rar_sent ? c.rar_cost : 0.0) + l.msg4_rbs + ptm.rbs_at(vf);
        if (l.msg3_rbs + c.prach_cost > c.ul_budget_per_vf + 1e-9 ||
            dl > c.dl_budget_per_vf + 1e-9 ||
            l.rar_grants > static_cast<double>(d.rar_capacity) + 1e-9) {
          ++violations;
        }
      }
      if (std::abs(access.total_success() + access.total_failures() - n) > 1e-6) ++violations;
    };
    audit(run_fluid(c, d, plan).access);
    audit(run_replication(c, d, plan, static_cast<std::uint64_t>(trial)).access);
    ++checked;
  }
  return {violations == 0 && checked > 100, std::to_string(checked) +
                                                " random scenarios in both engines, violations=" +
                                                std::to_string(violations)};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>> kCriteria = {
    {"NeGP completes every access for N=50..500", negp_reliability},
    {"SP and GP lose a few percent of devices at N=500", failure_band},
    {"NeGP halves access delay and energy of eGP at N=500", negp_gains},
    {"fluid and Monte Carlo agree on P_A, D_A, D_Total", engine_agreement},
    {"NeGP sustains its steady arrival rate for 10 s", arrival_capacity},
    {"payload size adds a constant delay", payload_determinism},
    {"NeGP saturates while GP degrades", saturation},
    {"preamble occupancy matches enumeration and sampling", occupancy_oracle},
    {"single device follows the deterministic pipeline", deterministic_pipeline},
    {"ledgers and device conservation hold on random scenarios", ledger_safety},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critcast acceptance report"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = kCriteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all_pass = all_pass && v.pass;
    std::cout << (v.pass ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": "
              << kCriteria[i].first << " | " << v.detail << " | " << num(secs) << " s\n";
  }
  return all_pass ? 0 : 1;
}
