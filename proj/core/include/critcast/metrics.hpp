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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "critcast/access.hpp"
#include "critcast/config.hpp"
#include "critcast/scptm.hpp"

namespace critcast {

enum class Provenance { kAnalytic, kMonteCarlo };

std::string_view to_string(Provenance provenance) noexcept;

/// Metric names in report order. Delays are in ms, energies in mJ,
/// utilizations and the success probability are fractions.
inline constexpr std::array<std::string_view, 10> kMetricNames = {
    "P_A", "D_A", "D_Idle", "D_TX", "D_Total", "D_Service", "E_A", "E_Total", "R_UL", "R_DL"};

struct AccessMetrics {
  double success_prob = 0.0;
  double access_delay = 0.0;
  std::vector<double> completion_vf;     // i*_q, NaN for subgroups nobody finished
  std::vector<double> msg2_retx_mean;    // r2_q
  std::vector<double> msg3_retx_mean;    // r3_q
};

struct DelayMetrics {
  double idle = 0.0;
  double tx = 0.0;
  double total = 0.0;
  double service = 0.0;
};

struct EnergyMetrics {
  double access = 0.0;
  double total = 0.0;
};

struct ResourceMetrics {
  double ul = 0.0;
  double dl = 0.0;
};

struct MetricsReport {
  Provenance provenance = Provenance::kAnalytic;
  double access_success_prob = 0.0;
  double avg_access_delay = 0.0;
  double avg_idle_delay = 0.0;
  double avg_tx_delay = 0.0;
  double avg_total_delay = 0.0;
  double service_delay = 0.0;
  double avg_access_energy = 0.0;
  double avg_total_energy = 0.0;
  double ul_utilization = 0.0;
  double dl_utilization = 0.0;
  std::vector<double> msg2_retx_mean;
  std::vector<double> msg3_retx_mean;
  std::int64_t horizon_vfs = 0;
  double failures = 0.0;

  /// The ten scalar metrics in kMetricNames order.
  std::array<double, 10> values() const noexcept;
};

/// Success probability, mean access delay and the per-subgroup mean
/// retransmission indices. Undefined quantities come back as NaN.
AccessMetrics access_metrics(const AccessRecord& access, const ScenarioConfig& config);

DelayMetrics delay_metrics(const AccessMetrics& access_part, const AccessRecord& access,
                           const PtmSchedule& schedule, const ScenarioConfig& config);

EnergyMetrics energy_metrics(const AccessMetrics& access_part, const DelayMetrics& delays,
                             const ScenarioConfig& config);

/// Utilizations over VFs 1..horizon; VFs past the record count as idle.
ResourceMetrics resource_metrics(const AccessRecord& access, const PtmSchedule& schedule,
                                 const ScenarioConfig& config, std::int64_t horizon);

/// One VF past whatever finished last, access or multicast.
std::int64_t natural_horizon(const AccessRecord& access, const PtmSchedule& schedule) noexcept;

/// Every metric at once. `horizon` widens the utilization window (never
/// narrows it below the natural horizon).
MetricsReport compute_metrics(const AccessRecord& access, const PtmSchedule& schedule,
                              const ScenarioConfig& config, Provenance provenance,
                              std::optional<std::int64_t> horizon = std::nullopt);

/// Column names of write_metrics_csv_row, comma-separated.
std::string metrics_csv_header();
void write_metrics_csv_row(std::ostream& out, const MetricsReport& report);
std::string metrics_to_json(const MetricsReport& report, int indent = 2);

}  // namespace critcast
