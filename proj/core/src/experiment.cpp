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


#include "critcast/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "critcast/errors.hpp"
#include "critcast/format.hpp"

namespace critcast {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidParameter("sweep", "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const auto end = text.find(sep, begin);
    parts.push_back(text.substr(begin, end - begin));
    if (end == std::string_view::npos) return parts;
    begin = end + 1;
  }
}

constexpr std::array<std::string_view, 3> kValidatedMetrics = {"P_A", "D_A", "D_Total"};

std::size_t metric_index(std::string_view name) {
  const auto it = std::find(kMetricNames.begin(), kMetricNames.end(), name);
  return static_cast<std::size_t>(it - kMetricNames.begin());
}

}  // namespace

std::string_view to_string(Engine engine) noexcept {
  switch (engine) {
    case Engine::kFluid: return "fluid";
    case Engine::kMonteCarlo: return "mc";
    case Engine::kBoth: return "both";
  }
  return "unknown";
}

Engine parse_engine(std::string_view name) {
  if (name == "fluid") return Engine::kFluid;
  if (name == "mc") return Engine::kMonteCarlo;
  if (name == "both") return Engine::kBoth;
  throw InvalidParameter("engine", "unknown engine '" + std::string(name) +
                                       "' (valid: fluid, mc, both)");
}

FluidRun run_fluid_scenario(const ScenarioConfig& config, std::optional<std::int64_t> horizon) {
  FluidRun run;
  run.derived = derive(config);
  run.plan = build_plan(config, run.derived);
  run.trace = run_fluid(config, run.derived, run.plan);
  run.schedule = schedule(run.trace.access, config, run.derived);
  run.report =
      compute_metrics(run.trace.access, run.schedule, config, Provenance::kAnalytic, horizon);
  return run;
}

std::int64_t common_horizon(const ScenarioConfig& config, const std::vector<Scheme>& schemes) {
  std::int64_t horizon = 1;
  for (const Scheme s : schemes) {
    ScenarioConfig c = config;
    c.scheme = s;
    const FluidRun run = run_fluid_scenario(c);
    horizon = std::max(horizon, run.report.horizon_vfs);
  }
  return horizon;
}

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  ScenarioResult result;
  if (options.engine != Engine::kMonteCarlo) {
    result.fluid = run_fluid_scenario(config, options.horizon).report;
  }
  if (options.engine != Engine::kFluid) {
    const DerivedQuantities derived = derive(config);
    const PagingPlan plan = build_plan(config, derived);
    EnsembleOptions ensemble;
    ensemble.num_reps = options.reps;
    ensemble.base_seed = config.seed;
    ensemble.threads = options.threads;
    ensemble.horizon = options.horizon;
    result.montecarlo = run_ensemble(config, derived, plan, ensemble);
  }
  return result;
}

SweepSpec parse_sweep(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
    throw InvalidParameter("sweep", "expected key=start:stop:step or key=v1,v2,...");
  }
  SweepSpec spec;
  spec.key = std::string(text.substr(0, eq));
  if (spec.key == "N") spec.key = "num_devices";
  const std::string_view values = text.substr(eq + 1);
  if (values.find(':') != std::string_view::npos) {
    const auto parts = split(values, ':');
    if (parts.size() != 3) throw InvalidParameter("sweep", "range needs start:stop:step");
    const auto start = parse_int(parts[0], "range start");
    const auto stop = parse_int(parts[1], "range stop");
    const auto step = parse_int(parts[2], "range step");
    if (step <= 0 || stop < start) throw InvalidParameter("sweep", "empty or backwards range");
    for (auto v = start; v <= stop; v += step) spec.values.push_back(std::to_string(v));
  } else {
    for (const auto part : split(values, ',')) {
      if (part.empty()) throw InvalidParameter("sweep", "empty value in list");
      spec.values.emplace_back(part);
    }
  }
  return spec;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const SweepSpec& spec,
                                const std::vector<Scheme>& schemes, const RunOptions& options) {
  std::vector<SweepRow> rows;
  for (const auto& value : spec.values) {
    ScenarioConfig point = base;
    apply_override(point, spec.key, value);
    point = validate(point);
    RunOptions run = options;
    run.horizon = std::max(options.horizon.value_or(0), common_horizon(point, schemes));

    for (const Scheme s : schemes) {
      ScenarioConfig c = point;
      c.scheme = s;
      const ScenarioResult result = run_scenario(c, run);
      auto emit = [&](Provenance provenance, std::size_t m, double mean, double ci,
                      std::int64_t reps) {
        rows.push_back({spec.key, value, s, provenance, kMetricNames[m], mean, ci, reps});
      };
      if (result.fluid) {
        const auto values = result.fluid->values();
        for (std::size_t m = 0; m < values.size(); ++m) {
          emit(Provenance::kAnalytic, m, values[m], 0.0, 0);
        }
      }
      if (result.montecarlo) {
        for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
          const auto& summary = result.montecarlo->summary[m];
          emit(Provenance::kMonteCarlo, m, summary.mean, summary.ci_half_width, run.reps);
        }
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "# critcast-sweep v1\n"
      << "parameter,value,scheme,engine,metric,mean,ci_half_width,reps\n";
  for (const auto& row : rows) {
    out << row.key << ',' << row.value << ',' << to_string(row.scheme) << ','
        << to_string(row.provenance) << ',' << row.metric << ',' << format_number(row.mean)
        << ',' << format_number(row.ci_half_width) << ',' << row.reps << '\n';
  }
}

std::vector<ValidationRow> run_validation(const ScenarioConfig& base,
                                          const std::vector<Scheme>& schemes,
                                          const RunOptions& options, double tolerance) {
  if (tolerance < 0.0) throw InvalidParameter("tolerance", "must be >= 0");
  RunOptions run = options;
  run.engine = Engine::kBoth;
  run.horizon = std::max(options.horizon.value_or(0), common_horizon(base, schemes));

  std::vector<ValidationRow> rows;
  for (const Scheme s : schemes) {
    ScenarioConfig c = base;
    c.scheme = s;
    const ScenarioResult result = run_scenario(c, run);
    const auto fluid = result.fluid->values();
    for (const auto name : kValidatedMetrics) {
      const std::size_t m = metric_index(name);
      const MetricSummary& mc = result.montecarlo->summary[m];
      ValidationRow row;
      row.scheme = s;
      row.metric = name;
      row.fluid = fluid[m];
      row.mc_mean = mc.mean;
      row.mc_ci = mc.ci_half_width;
      const double diff = std::abs(row.fluid - row.mc_mean);
      row.relative_diff = row.fluid != 0.0 ? diff / std::abs(row.fluid) : diff;
      row.pass = row.relative_diff <= tolerance || diff <= row.mc_ci;
      if (std::isnan(row.fluid) && std::isnan(row.mc_mean)) row.pass = true;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_validation_csv(std::ostream& out, const std::vector<ValidationRow>& rows) {
  out << "# critcast-validate v1\n"
      << "scheme,metric,fluid,mc_mean,mc_ci_half_width,relative_diff,result\n";
  for (const auto& row : rows) {
    out << to_string(row.scheme) << ',' << row.metric << ',' << format_number(row.fluid) << ','
        << format_number(row.mc_mean) << ',' << format_number(row.mc_ci) << ','
        << format_number(row.relative_diff) << ',' << (row.pass ? "pass" : "fail") << '\n';
  }
}

}  // namespace critcast
