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

#include "critcast/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "critcast/errors.hpp"
#include "critcast/rounding.hpp"
#include "json.hpp"

namespace critcast {

using nlohmann::json;

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::kSP: return "SP";
    case Scheme::kGP: return "GP";
    case Scheme::kEGP: return "eGP";
    case Scheme::kNeGP: return "NeGP";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (to_string(s) == name) return s;
  }
  throw InvalidParameter("scheme", "unknown scheme '" + std::string(name) +
                                       "' (valid: SP, GP, eGP, NeGP)");
}

std::string_view to_string(PtmEnergyMode mode) noexcept {
  return mode == PtmEnergyMode::kAsWritten ? "as-written" : "rx-corrected";
}

PtmEnergyMode parse_ptm_energy_mode(std::string_view name) {
  if (name == "as-written") return PtmEnergyMode::kAsWritten;
  if (name == "rx-corrected") return PtmEnergyMode::kRxCorrected;
  throw InvalidParameter("ptm_energy_mode",
                         "unknown mode '" + std::string(name) +
                             "' (valid: as-written, rx-corrected)");
}

namespace {

double cost_for(const std::vector<double>& costs, std::size_t subgroup,
                const char* key) {
  if (costs.size() == 1) return costs.front();
  if (subgroup >= costs.size()) {
    throw InvalidParameter(key, "has " + std::to_string(costs.size()) +
                                    " entries but subgroup " +
                                    std::to_string(subgroup + 1) +
                                    " was requested");
  }
  return costs[subgroup];
}

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw InvalidParameter(key, what);
}

std::int64_t as_count(const json& v, const char* key) {
  if (v.is_number_integer() || v.is_number_unsigned()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d)) return static_cast<std::int64_t>(d);
  }
  throw InvalidParameter(key, "expects an integer, got " + v.dump());
}

double as_real(const json& v, const char* key) {
  if (!v.is_number()) throw InvalidParameter(key, "expects a number, got " + v.dump());
  return v.get<double>();
}

std::vector<double> as_cost_vector(const json& v, const char* key) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array() && !v.empty()) {
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_real(e, key));
    return out;
  }
  throw InvalidParameter(key, "expects a number or a non-empty array");
}

std::string as_text(const json& v, const char* key) {
  if (!v.is_string()) throw InvalidParameter(key, "expects a string, got " + v.dump());
  return v.get<std::string>();
}

using Setter = std::function<void(ScenarioConfig&, const json&)>;

#define CRITCAST_COUNT(field) \
  {#field, [](ScenarioConfig& c, const json& v) { c.field = as_count(v, #field); }}
#define CRITCAST_REAL(field) \
  {#field, [](ScenarioConfig& c, const json& v) { c.field = as_real(v, #field); }}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      CRITCAST_COUNT(num_devices),
      CRITCAST_COUNT(preamble_pool),
      CRITCAST_COUNT(max_retransmissions),
      CRITCAST_COUNT(rao_per_frame),
      CRITCAST_REAL(vf_duration),
      CRITCAST_REAL(preamble_proc_delay),
      CRITCAST_REAL(rar_window),
      CRITCAST_REAL(backoff_window),
      CRITCAST_REAL(contention_resolution_window),
      CRITCAST_REAL(ul_budget_per_vf),
      CRITCAST_REAL(prach_cost),
      CRITCAST_REAL(dl_budget_per_vf),
      CRITCAST_REAL(rar_cost),
      {"msg3_cost",
       [](ScenarioConfig& c, const json& v) { c.msg3_cost = as_cost_vector(v, "msg3_cost"); }},
      {"msg4_cost",
       [](ScenarioConfig& c, const json& v) { c.msg4_cost = as_cost_vector(v, "msg4_cost"); }},
      CRITCAST_REAL(multicast_payload),
      CRITCAST_COUNT(critical_interval),
      CRITCAST_REAL(rar_overhead_fraction),
      {"msg_tx_times",
       [](ScenarioConfig& c, const json& v) {
         if (v.is_number()) {
           c.msg_tx_times.fill(v.get<double>());
           return;
         }
         if (!v.is_array() || v.size() != 4) {
           throw InvalidParameter("msg_tx_times", "expects four numbers [t1, t2, t3, t4]");
         }
         for (std::size_t i = 0; i < 4; ++i) c.msg_tx_times[i] = as_real(v[i], "msg_tx_times");
       }},
      CRITCAST_REAL(power_tx),
      CRITCAST_REAL(power_rx),
      CRITCAST_REAL(power_idle),
      {"horizon",
       [](ScenarioConfig& c, const json& v) {
         if (v.is_string() && v.get<std::string>() == "auto") {
           c.horizon.reset();
         } else {
           c.horizon = as_count(v, "horizon");
         }
       }},
      {"scheme",
       [](ScenarioConfig& c, const json& v) { c.scheme = parse_scheme(as_text(v, "scheme")); }},
      {"ptm_energy_mode",
       [](ScenarioConfig& c, const json& v) {
         c.ptm_energy_mode = parse_ptm_energy_mode(as_text(v, "ptm_energy_mode"));
       }},
      CRITCAST_COUNT(sp_group_size),
      CRITCAST_COUNT(egp_group_size),
      CRITCAST_REAL(egp_interval),
      {"msg2_wait_vfs",
       [](ScenarioConfig& c, const json& v) {
         if (v.is_string() && v.get<std::string>() == "auto") {
           c.msg2_wait_vfs.reset();
         } else {
           c.msg2_wait_vfs = as_count(v, "msg2_wait_vfs");
         }
       }},
      {"collision_attempt_base",
       [](ScenarioConfig& c, const json& v) {
         c.collision_attempt_base = as_text(v, "collision_attempt_base");
       }},
      {"seed",
       [](ScenarioConfig& c, const json& v) {
         const auto s = as_count(v, "seed");
         if (s < 0) throw InvalidParameter("seed", "must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
  };
  return table;
}

#undef CRITCAST_COUNT
#undef CRITCAST_REAL

void set_field(ScenarioConfig& config, std::string_view key, const json& value) {
  if (key == "N") key = "num_devices";
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) {
    throw InvalidParameter(std::string(key), "unknown scenario key");
  }
  it->second(config, value);
}

}  // namespace

double ScenarioConfig::msg3_cost_for(std::size_t subgroup) const {
  return cost_for(msg3_cost, subgroup, "msg3_cost");
}

double ScenarioConfig::msg4_cost_for(std::size_t subgroup) const {
  return cost_for(msg4_cost, subgroup, "msg4_cost");
}

ScenarioConfig validate(ScenarioConfig c) {
  require(c.num_devices >= 0, "num_devices", "must be >= 0");
  require(c.preamble_pool >= 1, "preamble_pool", "must be >= 1");
  require(c.max_retransmissions >= 1, "max_retransmissions", "must be >= 1");
  require(c.rao_per_frame >= 1, "rao_per_frame", "must be >= 1");

  require(c.vf_duration > 0, "vf_duration", "must be > 0");
  require(c.preamble_proc_delay > 0, "preamble_proc_delay", "must be > 0");
  require(c.rar_window > 0, "rar_window", "must be > 0");
  require(c.backoff_window > 0, "backoff_window", "must be > 0");
  require(c.contention_resolution_window > 0, "contention_resolution_window", "must be > 0");

  require(c.ul_budget_per_vf > 0, "ul_budget_per_vf", "must be > 0");
  require(c.dl_budget_per_vf > 0, "dl_budget_per_vf", "must be > 0");
  require(c.prach_cost >= 0, "prach_cost", "must be >= 0");
  require(c.prach_cost < c.ul_budget_per_vf, "prach_cost",
          "prach_cost must be < ul_budget_per_vf (no UL left for Msg3)");
  require(c.rar_cost >= 0, "rar_cost", "must be >= 0");
  require(c.rar_cost < c.dl_budget_per_vf, "rar_cost",
          "rar_cost must be < dl_budget_per_vf (no DL left after Msg2)");

  const double ul_msg3 = c.ul_budget_per_vf - c.prach_cost;
  const double dl_after_rar = c.dl_budget_per_vf - c.rar_cost;
  require(!c.msg3_cost.empty(), "msg3_cost", "must not be empty");
  require(!c.msg4_cost.empty(), "msg4_cost", "must not be empty");
  for (double u : c.msg3_cost) {
    require(u > 0, "msg3_cost", "entries must be > 0");
    require(u <= ul_msg3, "msg3_cost", "an entry exceeds the UL budget left after the PRACH");
  }
  for (double d : c.msg4_cost) {
    require(d > 0, "msg4_cost", "entries must be > 0");
    require(d <= dl_after_rar, "msg4_cost", "an entry exceeds the DL budget left after Msg2");
  }

  require(c.multicast_payload >= 1, "multicast_payload", "must be >= 1 RB");
  require(c.critical_interval >= 1, "critical_interval", "must be >= 1 VF");
  require(c.rar_overhead_fraction >= 0 && c.rar_overhead_fraction < 1,
          "rar_overhead_fraction", "must lie in [0, 1)");
  for (double t : c.msg_tx_times) require(t > 0, "msg_tx_times", "entries must be > 0");
  require(c.power_tx > 0, "power_tx", "must be > 0");
  require(c.power_rx > 0, "power_rx", "must be > 0");
  require(c.power_idle > 0, "power_idle", "must be > 0");
  if (c.horizon) require(*c.horizon >= 1, "horizon", "must be >= 1 or \"auto\"");
  require(c.sp_group_size >= 1, "sp_group_size", "must be >= 1");
  require(c.egp_group_size >= 1, "egp_group_size", "must be >= 1");
  require(c.egp_interval > 0, "egp_interval", "must be > 0");
  if (c.msg2_wait_vfs) require(*c.msg2_wait_vfs >= 1, "msg2_wait_vfs", "must be >= 1");
  require(c.collision_attempt_base == "msg2_successes", "collision_attempt_base",
          "only \"msg2_successes\" is supported");

  const double acked_per_vf = std::floor((1.0 - c.rar_overhead_fraction) * c.dl_budget_per_vf + 1e-9);
  require(acked_per_vf >= 1, "rar_overhead_fraction",
          "leaves no RAR capacity (floor((1 - sigma) * dl_budget_per_vf) < 1)");
  return c;
}

DerivedQuantities derive(const ScenarioConfig& c) {
  DerivedQuantities d;
  const double t_vf = c.vf_duration;
  const auto a = static_cast<double>(c.rao_per_frame);

  d.msg2_wait_vfs = c.msg2_wait_vfs.value_or(std::max<std::int64_t>(
      1, ceil_ratio((a - 1.0) * t_vf + c.preamble_proc_delay, a * t_vf)));
  d.crt_vfs = std::max<std::int64_t>(1, ceil_ratio(c.contention_resolution_window, t_vf));
  d.backoff_vfs = std::max<std::int64_t>(1, ceil_ratio(c.backoff_window, t_vf));
  d.rar_window_vfs = std::max<std::int64_t>(1, ceil_ratio(c.rar_window, t_vf));

  const auto acked_per_vf = static_cast<std::int64_t>(
      std::floor((1.0 - c.rar_overhead_fraction) * c.dl_budget_per_vf + 1e-9));
  d.rar_capacity = acked_per_vf * d.rar_window_vfs;

  // Paging VF -> Msg1 (same VF) -> Msg2 after k VFs -> Msg3 -> Msg4.
  d.ra_pipeline_vfs = d.msg2_wait_vfs + 2;
  d.ptm_tx_vfs = std::max<std::int64_t>(
      1, ceil_ratio(c.multicast_payload, c.dl_budget_per_vf - c.rar_cost));
  d.first_ptm_offset_vfs = d.ra_pipeline_vfs + 1;

  switch (c.scheme) {
    case Scheme::kSP:
      d.group_size = c.sp_group_size;
      d.paging_interval_vfs = 1;
      break;
    case Scheme::kGP:
      d.group_size = c.num_devices;
      d.paging_interval_vfs = 0;
      break;
    case Scheme::kEGP:
      d.group_size = c.egp_group_size;
      d.paging_interval_vfs = std::max<std::int64_t>(1, ceil_ratio(c.egp_interval, t_vf));
      break;
    case Scheme::kNeGP:
      d.group_size = d.rar_capacity;
      d.paging_interval_vfs = d.ra_pipeline_vfs + d.ptm_tx_vfs;
      break;
  }
  d.ptm_interval_vfs =
      c.scheme == Scheme::kNeGP ? d.paging_interval_vfs : c.critical_interval;
  return d;
}

ScenarioConfig parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("scenario must be a JSON object");
  ScenarioConfig config;
  for (const auto& [key, value] : doc.items()) {
    if (!key.empty() && key.front() == '_') continue;  // comments
    set_field(config, key, value);
  }
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string to_json(const ScenarioConfig& c, int indent) {
  json j;
  j["num_devices"] = c.num_devices;
  j["preamble_pool"] = c.preamble_pool;
  j["max_retransmissions"] = c.max_retransmissions;
  j["rao_per_frame"] = c.rao_per_frame;
  j["vf_duration"] = c.vf_duration;
  j["preamble_proc_delay"] = c.preamble_proc_delay;
  j["rar_window"] = c.rar_window;
  j["backoff_window"] = c.backoff_window;
  j["contention_resolution_window"] = c.contention_resolution_window;
  j["ul_budget_per_vf"] = c.ul_budget_per_vf;
  j["prach_cost"] = c.prach_cost;
  j["dl_budget_per_vf"] = c.dl_budget_per_vf;
  j["rar_cost"] = c.rar_cost;
  j["msg3_cost"] = c.msg3_cost;
  j["msg4_cost"] = c.msg4_cost;
  j["multicast_payload"] = c.multicast_payload;
  j["critical_interval"] = c.critical_interval;
  j["rar_overhead_fraction"] = c.rar_overhead_fraction;
  j["msg_tx_times"] = c.msg_tx_times;
  j["power_tx"] = c.power_tx;
  j["power_rx"] = c.power_rx;
  j["power_idle"] = c.power_idle;
  j["horizon"] = c.horizon ? json(*c.horizon) : json("auto");
  j["scheme"] = std::string(to_string(c.scheme));
  j["ptm_energy_mode"] = std::string(to_string(c.ptm_energy_mode));
  j["sp_group_size"] = c.sp_group_size;
  j["egp_group_size"] = c.egp_group_size;
  j["egp_interval"] = c.egp_interval;
  j["msg2_wait_vfs"] = c.msg2_wait_vfs ? json(*c.msg2_wait_vfs) : json("auto");
  j["collision_attempt_base"] = c.collision_attempt_base;
  j["seed"] = c.seed;
  return j.dump(indent);
}

void apply_override(ScenarioConfig& config, std::string_view key, std::string_view value) {
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = std::string(value);
  }
  set_field(config, key, parsed);
}

void apply_override(ScenarioConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw InvalidParameter(std::string(assignment), "override must look like key=value");
  }
  apply_override(config, assignment.substr(0, eq), assignment.substr(eq + 1));
}

}  // namespace critcast
