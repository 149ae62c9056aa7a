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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace critcast {

enum class Scheme { kSP, kGP, kEGP, kNeGP };

inline constexpr std::array<Scheme, 4> kAllSchemes = {
    Scheme::kSP, Scheme::kGP, Scheme::kEGP, Scheme::kNeGP};

std::string_view to_string(Scheme scheme) noexcept;
/// Throws InvalidParameter("scheme", ...) listing the valid names.
Scheme parse_scheme(std::string_view name);

/// How the multicast reception stage is charged in the total energy.
/// kAsWritten bills it at transmit power, kRxCorrected at receive power.
enum class PtmEnergyMode { kAsWritten, kRxCorrected };

std::string_view to_string(PtmEnergyMode mode) noexcept;
PtmEnergyMode parse_ptm_energy_mode(std::string_view name);

/// Every protocol, energy and run constant of one scenario.
///
/// Durations are milliseconds, resources are resource blocks (RBs), powers
/// are milliwatts. The defaults are the reference cell: 54 preambles, 10
/// attempts, 5 ms virtual frames (VFs), 12 UL/DL RBs per VF with 6 of the
/// UL RBs taken by the PRACH.
struct ScenarioConfig {
  std::int64_t num_devices = 500;
  std::int64_t preamble_pool = 54;
  std::int64_t max_retransmissions = 10;
  std::int64_t rao_per_frame = 2;

  double vf_duration = 5.0;
  double preamble_proc_delay = 5.0;
  double rar_window = 5.0;
  double backoff_window = 20.0;
  double contention_resolution_window = 48.0;

  double ul_budget_per_vf = 12.0;
  double prach_cost = 6.0;
  double dl_budget_per_vf = 12.0;
  double rar_cost = 6.0;
  /// Per-subgroup Msg3/Msg4 cost. One entry broadcasts to every subgroup;
  /// otherwise the length must equal the number of paging subgroups.
  std::vector<double> msg3_cost{1.0};
  std::vector<double> msg4_cost{1.0};

  double multicast_payload = 12.0;
  std::int64_t critical_interval = 5;  // VFs
  double rar_overhead_fraction = 0.30;
  std::array<double, 4> msg_tx_times{1.0, 1.0, 1.0, 1.0};

  double power_tx = 500.0;
  double power_rx = 80.0;
  double power_idle = 3.0;

  std::optional<std::int64_t> horizon;  // empty means "auto"
  Scheme scheme = Scheme::kNeGP;
  PtmEnergyMode ptm_energy_mode = PtmEnergyMode::kAsWritten;

  // Scheme-level constants of the reference paging strategies.
  std::int64_t sp_group_size = 16;
  std::int64_t egp_group_size = 36;
  double egp_interval = 30.0;

  /// Msg1 -> Msg2 wait in VFs; empty derives it from the frame layout.
  std::optional<std::int64_t> msg2_wait_vfs;
  /// Which devices weight the Msg3-collision attempt mean. Only
  /// "msg2_successes" is defined.
  std::string collision_attempt_base = "msg2_successes";

  std::uint64_t seed = 1;

  /// Cost of one subgroup's Msg3 / Msg4, honoring the broadcast rule.
  double msg3_cost_for(std::size_t subgroup) const;
  double msg4_cost_for(std::size_t subgroup) const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Quantities every engine needs, computed once from a valid config.
struct DerivedQuantities {
  std::int64_t msg2_wait_vfs = 0;         // Msg1 -> Msg2
  std::int64_t crt_vfs = 0;               // contention resolution window
  std::int64_t backoff_vfs = 0;           // backoff window
  std::int64_t rar_window_vfs = 0;
  std::int64_t rar_capacity = 0;          // preambles acknowledged per VF
  std::int64_t group_size = 0;            // paging group cap of the scheme
  std::int64_t paging_interval_vfs = 0;   // 0 when all devices are paged at once
  std::int64_t ra_pipeline_vfs = 0;       // paging VF -> Msg4 without contention
  std::int64_t ptm_tx_vfs = 0;            // multicast length at the post-RAR DL budget
  std::int64_t first_ptm_offset_vfs = 0;  // first multicast start minus first paging VF
  std::int64_t ptm_interval_vfs = 0;      // multicast cadence actually used

  bool operator==(const DerivedQuantities&) const = default;
};

/// Checks every invariant and returns the config unchanged, or throws
/// InvalidParameter naming the offending key.
ScenarioConfig validate(ScenarioConfig config);

/// Pure function of a validated config.
DerivedQuantities derive(const ScenarioConfig& config);

/// Scenario files are JSON objects keyed by the ScenarioConfig field names.
/// Missing keys keep their defaults; unknown keys are rejected.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string to_json(const ScenarioConfig& config, int indent = 2);

/// Applies one `key=value` override. The value is parsed as JSON first and
/// falls back to a bare string (so `scheme=NeGP` works unquoted).
void apply_override(ScenarioConfig& config, std::string_view assignment);
void apply_override(ScenarioConfig& config, std::string_view key,
                    std::string_view value);

}  // namespace critcast
