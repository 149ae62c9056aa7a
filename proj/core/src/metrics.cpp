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


#include "critcast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "critcast/errors.hpp"
#include "critcast/format.hpp"
#include "critcast/rounding.hpp"

namespace critcast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Mean of the entries that are numbers; NaN when there are none.
double mean_defined(const std::vector<double>& xs) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const double x : xs) {
    if (std::isnan(x)) continue;
    sum += x;
    ++n;
  }
  return n == 0 ? kNaN : sum / static_cast<double>(n);
}

void require_trace(const AccessRecord& access) {
  if (access.total_paged() > 0.0 && access.num_vfs() == 0) throw EmptyTrace();
}

}  // namespace

std::string_view to_string(Provenance provenance) noexcept {
  return provenance == Provenance::kAnalytic ? "analytic" : "montecarlo";
}

std::array<double, 10> MetricsReport::values() const noexcept {
  return {access_success_prob, avg_access_delay, avg_idle_delay,    avg_tx_delay,
          avg_total_delay,     service_delay,    avg_access_energy, avg_total_energy,
          ul_utilization,      dl_utilization};
}

AccessMetrics access_metrics(const AccessRecord& access, const ScenarioConfig& config) {
  require_trace(access);
  const std::size_t subgroups = access.num_subgroups();
  AccessMetrics out;
  out.completion_vf.assign(subgroups, kNaN);
  out.msg2_retx_mean.assign(subgroups, 0.0);
  out.msg3_retx_mean.assign(subgroups, 0.0);

  const double paged = access.total_paged();
  out.success_prob = paged > 0.0 ? 1.0 - access.total_failures() / paged : kNaN;

  std::vector<double> delays(subgroups, kNaN);
  for (std::size_t q = 0; q < subgroups; ++q) {
    if (access.msg2_fail_count[q] > 0.0) {
      out.msg2_retx_mean[q] = access.msg2_fail_attempt_sum[q] / access.msg2_fail_count[q];
    }
    if (access.msg3_coll_count[q] > 0.0) {
      out.msg3_retx_mean[q] = access.msg3_coll_attempt_sum[q] / access.msg3_coll_count[q];
    }
    if (access.success_of(q) <= 0.0) continue;
    // Weighted completion VF normalized by everyone paged in the subgroup.
    double weighted = 0.0;
    for (std::size_t v = 0; v < access.msg4_success.size(); ++v) {
      weighted += static_cast<double>(v + 1) * access.msg4_success[v][q];
    }
    out.completion_vf[q] = round_half_away(weighted / access.paged[q]);
    delays[q] =
        (out.completion_vf[q] - static_cast<double>(access.paging_vfs[q])) * config.vf_duration;
  }
  out.access_delay = mean_defined(delays);
  return out;
}

DelayMetrics delay_metrics(const AccessMetrics& access_part, const AccessRecord& access,
                           const PtmSchedule& schedule, const ScenarioConfig& config) {
  require_trace(access);
  const std::size_t subgroups = access.num_subgroups();
  DelayMetrics out;

  std::vector<double> idle(subgroups, kNaN);
  for (std::size_t q = 0; q < subgroups; ++q) {
    if (std::isnan(access_part.completion_vf[q])) continue;
    double weighted = 0.0;
    double members = 0.0;
    for (const auto& t : schedule.transmissions) {
      weighted += static_cast<double>(t.start_vf) * t.members[q];
      members += t.members[q];
    }
    if (members <= 0.0) continue;
    const double start = round_half_away(weighted / members) - 1.0;
    idle[q] = (start - access_part.completion_vf[q]) * config.vf_duration;
  }
  out.idle = mean_defined(idle);

  if (schedule.empty()) {
    out.tx = kNaN;
    out.service = kNaN;
  } else {
    double duration = 0.0;
    for (const auto& t : schedule.transmissions) duration += static_cast<double>(t.duration_vfs);
    out.tx = duration / static_cast<double>(schedule.transmissions.size()) * config.vf_duration;
    const auto& last = schedule.transmissions.back();
    out.service = static_cast<double>(last.start_vf + last.duration_vfs) * config.vf_duration;
  }
  out.total = access_part.access_delay + out.idle + out.tx;
  return out;
}

EnergyMetrics energy_metrics(const AccessMetrics& access_part, const DelayMetrics& delays,
                             const ScenarioConfig& config) {
  const auto& t = config.msg_tx_times;
  const double preamble_and_rar = config.power_tx * t[0] + config.power_rx * t[1];
  const double backoff_idle = config.power_idle * config.backoff_window;

  std::vector<double> per_subgroup;
  for (std::size_t q = 0; q < access_part.msg2_retx_mean.size(); ++q) {
    const double r2 = access_part.msg2_retx_mean[q];
    const double r3 = access_part.msg3_retx_mean[q];
    const double microjoules = (preamble_and_rar + backoff_idle) * r2 +
                               (preamble_and_rar + config.power_tx * t[2]) * (r3 + 1.0) +
                               config.power_rx * t[3];
    per_subgroup.push_back(microjoules / 1000.0);
  }
  EnergyMetrics out;
  out.access = mean_defined(per_subgroup);
  const double ptm_power = config.ptm_energy_mode == PtmEnergyMode::kRxCorrected
                               ? config.power_rx
                               : config.power_tx;
  out.total = out.access + (config.power_idle * delays.idle + ptm_power * delays.tx) / 1000.0;
  return out;
}

ResourceMetrics resource_metrics(const AccessRecord& access, const PtmSchedule& schedule,
                                 const ScenarioConfig& config, std::int64_t horizon) {
  require_trace(access);
  if (horizon < 1) throw InvalidParameter("horizon", "utilization horizon must be >= 1 VF");
  double ul_left = 0.0;
  double dl_left = 0.0;
  for (std::int64_t v = 1; v <= horizon; ++v) {
    double ul = config.ul_budget_per_vf - config.prach_cost;
    double dl = config.dl_budget_per_vf;
    if (v <= access.num_vfs()) {
      const VfLedger& ledger = access.vfs[static_cast<std::size_t>(v - 1)];
      ul = ledger.ul_available - ledger.msg3_rbs;
      dl = ledger.dl_available - ledger.msg4_rbs;
    }
    ul_left += ul;
    dl_left += dl - schedule.rbs_at(v);
  }
  const auto span = static_cast<double>(horizon);
  return {1.0 - ul_left / (span * config.ul_budget_per_vf),
          1.0 - dl_left / (span * config.dl_budget_per_vf)};
}

std::int64_t natural_horizon(const AccessRecord& access, const PtmSchedule& schedule) noexcept {
  return std::max(access.num_vfs(), schedule.end_vf()) + 1;
}

MetricsReport compute_metrics(const AccessRecord& access, const PtmSchedule& schedule,
                              const ScenarioConfig& config, Provenance provenance,
                              std::optional<std::int64_t> horizon) {
  const AccessMetrics a = access_metrics(access, config);
  const DelayMetrics d = delay_metrics(a, access, schedule, config);
  const EnergyMetrics e = energy_metrics(a, d, config);
  const std::int64_t span = std::max(natural_horizon(access, schedule), horizon.value_or(0));
  const ResourceMetrics r = resource_metrics(access, schedule, config, span);

  MetricsReport report;
  report.provenance = provenance;
  report.access_success_prob = a.success_prob;
  report.avg_access_delay = a.access_delay;
  report.avg_idle_delay = d.idle;
  report.avg_tx_delay = d.tx;
  report.avg_total_delay = d.total;
  report.service_delay = d.service;
  report.avg_access_energy = e.access;
  report.avg_total_energy = e.total;
  report.ul_utilization = r.ul;
  report.dl_utilization = r.dl;
  report.msg2_retx_mean = a.msg2_retx_mean;
  report.msg3_retx_mean = a.msg3_retx_mean;
  report.horizon_vfs = span;
  report.failures = access.total_failures();
  return report;
}

std::string metrics_csv_header() {
  std::string header = "provenance";
  for (const auto name : kMetricNames) {
    header += ',';
    header += name;
  }
  header += ",horizon_vfs,failures";
  return header;
}

void write_metrics_csv_row(std::ostream& out, const MetricsReport& report) {
  out << to_string(report.provenance);
  for (const double v : report.values()) out << ',' << format_number(v);
  out << ',' << report.horizon_vfs << ',' << format_number(report.failures) << '\n';
}

std::string metrics_to_json(const MetricsReport& report, int indent) {
  auto number = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  nlohmann::ordered_json j;
  j["provenance"] = std::string(to_string(report.provenance));
  const auto values = report.values();
  for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
    j[std::string(kMetricNames[m])] = number(values[m]);
  }
  j["horizon_vfs"] = report.horizon_vfs;
  j["failures"] = report.failures;
  j["r2"] = report.msg2_retx_mean;
  j["r3"] = report.msg3_retx_mean;
  return j.dump(indent);
}

}  // namespace critcast
