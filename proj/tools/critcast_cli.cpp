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


// critcast: command-line front end for the paging/multicast laboratory.
//
//   critcast run      SCENARIO [--engine fluid|mc|both] [--reps N] ...
//   critcast sweep    SCENARIO --sweep N=100:500:100 [--schemes SP,GP,...] ...
//   critcast validate SCENARIO [--reps N] [--tolerance 0.05] ...
//
// Exit status: 0 success, 1 runtime error, 2 usage or validation error,
// 3 when `validate` finds a mismatch.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "critcast/config.hpp"
#include "critcast/errors.hpp"
#include "critcast/experiment.hpp"
#include "critcast/fluid.hpp"
#include "critcast/format.hpp"
#include "critcast/mc.hpp"
#include "critcast/metrics.hpp"
#include "critcast/paging.hpp"
#include "critcast/scptm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitValidationFailed = 3;

struct CommonOptions {
  std::string scenario;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string engine = "fluid";
  std::int64_t reps = 100;
  unsigned threads = 0;
  std::string out;
  std::string format = "csv";
};

struct RunDumps {
  std::string plan;
  std::string trace;
  std::string schedule;
  std::string events;
};

void add_common(CLI::App& cmd, CommonOptions& o, bool with_engine) {
  cmd.add_option("scenario", o.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  cmd.add_option("--set", o.overrides, "Override a scenario key (key=value, repeatable)");
  cmd.add_option("--seed", o.seed, "Base seed for Monte Carlo replications");
  if (with_engine) {
    cmd.add_option("--engine", o.engine, "Engine to run")
        ->check(CLI::IsMember({"fluid", "mc", "both"}));
  }
  cmd.add_option("--reps", o.reps, "Monte Carlo replications")->check(CLI::PositiveNumber);
  cmd.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  cmd.add_option("--out", o.out, "Write results here instead of stdout");
}

critcast::ScenarioConfig load(const CommonOptions& o) {
  critcast::ScenarioConfig config = critcast::load_scenario(o.scenario);
  for (const auto& assignment : o.overrides) critcast::apply_override(config, assignment);
  if (o.seed) config.seed = *o.seed;
  return critcast::validate(config);
}

critcast::RunOptions run_options(const CommonOptions& o) {
  critcast::RunOptions r;
  r.engine = critcast::parse_engine(o.engine);
  r.reps = o.reps;
  r.threads = o.threads;
  return r;
}

std::vector<critcast::Scheme> parse_schemes(const std::string& list) {
  std::vector<critcast::Scheme> schemes;
  std::stringstream in(list);
  for (std::string name; std::getline(in, name, ',');) {
    schemes.push_back(critcast::parse_scheme(name));
  }
  if (schemes.empty()) throw critcast::InvalidParameter("schemes", "list is empty");
  return schemes;
}

// Writes to --out when given, stdout otherwise.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw critcast::Error("cannot open '" + path + "' for writing");
  write(file);
}

template <typename Fn>
void dump_if(const std::string& path, Fn&& write) {
  if (!path.empty()) emit(path, std::forward<Fn>(write));
}

nlohmann::ordered_json summary_json(const critcast::EnsembleResult& mc) {
  nlohmann::ordered_json mean;
  nlohmann::ordered_json ci;
  for (std::size_t m = 0; m < critcast::kMetricNames.size(); ++m) {
    const std::string name(critcast::kMetricNames[m]);
    const auto& s = mc.summary[m];
    mean[name] = std::isnan(s.mean) ? nlohmann::ordered_json() : nlohmann::ordered_json(s.mean);
    ci[name] = s.ci_half_width;
  }
  nlohmann::ordered_json j;
  j["reps"] = mc.reports.size();
  j["mean"] = mean;
  j["ci_half_width"] = ci;
  j["failures"] = mc.failures;
  return j;
}

int cmd_run(const CommonOptions& o, const RunDumps& dumps) {
  const critcast::ScenarioConfig config = load(o);
  const critcast::RunOptions options = run_options(o);
  const critcast::ScenarioResult result = critcast::run_scenario(config, options);

  if (!dumps.plan.empty() || !dumps.trace.empty() || !dumps.schedule.empty()) {
    const critcast::FluidRun fluid = critcast::run_fluid_scenario(config);
    dump_if(dumps.plan, [&](std::ostream& out) { critcast::write_plan_csv(out, fluid.plan); });
    dump_if(dumps.trace, [&](std::ostream& out) { critcast::write_fluid_csv(out, fluid.trace); });
    dump_if(dumps.schedule,
            [&](std::ostream& out) { critcast::write_schedule_csv(out, fluid.schedule); });
  }
  if (!dumps.events.empty()) {
    const auto derived = critcast::derive(config);
    const auto plan = critcast::build_plan(config, derived);
    const auto trace = critcast::run_replication(config, derived, plan, config.seed);
    emit(dumps.events, [&](std::ostream& out) { critcast::write_events_csv(out, trace); });
  }

  emit(o.out, [&](std::ostream& out) {
    if (o.format == "json") {
      nlohmann::ordered_json j;
      j["scheme"] = std::string(critcast::to_string(config.scheme));
      j["num_devices"] = config.num_devices;
      if (result.fluid) j["fluid"] = nlohmann::ordered_json::parse(critcast::metrics_to_json(*result.fluid));
      if (result.montecarlo) j["montecarlo"] = summary_json(*result.montecarlo);
      out << j.dump(2) << '\n';
      return;
    }
    out << "# critcast-metrics v1\n" << critcast::metrics_csv_header() << '\n';
    if (result.fluid) critcast::write_metrics_csv_row(out, *result.fluid);
    if (result.montecarlo) {
      // Mean row, then the 95% half-width row, in the same columns.
      const auto& mc = *result.montecarlo;
      double failures = 0.0;
      for (const double f : mc.failures) failures += f;
      failures /= static_cast<double>(mc.failures.size());
      out << "montecarlo";
      for (const auto& s : mc.summary) out << ',' << critcast::format_number(s.mean);
      out << ',' << mc.reports.front().horizon_vfs << ',' << critcast::format_number(failures)
          << '\n';
      out << "montecarlo_ci95";
      for (const auto& s : mc.summary) out << ',' << critcast::format_number(s.ci_half_width);
      out << ",,\n";
    }
  });
  return kExitOk;
}

int cmd_sweep(const CommonOptions& o, const std::string& sweep, const std::string& schemes) {
  const critcast::ScenarioConfig config = load(o);
  const auto rows = critcast::run_sweep(config, critcast::parse_sweep(sweep),
                                        parse_schemes(schemes), run_options(o));
  emit(o.out, [&](std::ostream& out) { critcast::write_sweep_csv(out, rows); });
  return kExitOk;
}

int cmd_validate(const CommonOptions& o, const std::string& schemes, double tolerance) {
  const critcast::ScenarioConfig config = load(o);
  const auto rows =
      critcast::run_validation(config, parse_schemes(schemes), run_options(o), tolerance);
  emit(o.out, [&](std::ostream& out) { critcast::write_validation_csv(out, rows); });
  bool ok = true;
  for (const auto& row : rows) {
    if (row.pass) continue;
    ok = false;
    std::cerr << "mismatch: " << critcast::to_string(row.scheme) << ' ' << row.metric
              << " fluid=" << critcast::format_number(row.fluid)
              << " mc=" << critcast::format_number(row.mc_mean) << " +/- "
              << critcast::format_number(row.mc_ci)
              << " rel=" << critcast::format_number(row.relative_diff) << '\n';
  }
  return ok ? kExitOk : kExitValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critcast: group paging and SC-PTM multicast laboratory"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  RunDumps dumps;
  auto* run = app.add_subcommand("run", "Run one scenario and print its metrics");
  add_common(*run, run_opts, true);
  run->add_option("--format", run_opts.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--plan-out", dumps.plan, "Write the paging plan CSV");
  run->add_option("--trace-out", dumps.trace, "Write the fluid trace CSV");
  run->add_option("--schedule-out", dumps.schedule, "Write the fluid SC-PTM schedule CSV");
  run->add_option("--events-out", dumps.events, "Write one replication's event log CSV");

  CommonOptions sweep_opts;
  std::string sweep_spec;
  std::string sweep_schemes = "SP,GP,eGP,NeGP";
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter, long-format CSV");
  add_common(*sweep, sweep_opts, true);
  sweep->add_option("--sweep", sweep_spec, "key=start:stop:step or key=v1,v2,...")->required();
  sweep->add_option("--schemes", sweep_schemes, "Comma-separated schemes");

  CommonOptions validate_opts;
  std::string validate_schemes = "SP,GP,eGP,NeGP";
  double tolerance = 0.05;
  auto* validate = app.add_subcommand("validate", "Compare the fluid engine with Monte Carlo");
  add_common(*validate, validate_opts, false);
  validate->add_option("--schemes", validate_schemes, "Comma-separated schemes");
  validate->add_option("--tolerance", tolerance, "Relative tolerance")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_opts, dumps);
    if (*sweep) return cmd_sweep(sweep_opts, sweep_spec, sweep_schemes);
    return cmd_validate(validate_opts, validate_schemes, tolerance);
  } catch (const critcast::InvalidParameter& e) {
    std::cerr << "critcast: invalid parameter " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "critcast: " << e.what() << '\n';
    return kExitRuntime;
  }
}
