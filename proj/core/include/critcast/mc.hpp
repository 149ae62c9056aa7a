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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "critcast/access.hpp"
#include "critcast/config.hpp"
#include "critcast/paging.hpp"

namespace critcast {

enum class DevicePhase {
  kIdle,
  kAwaitingMsg2,
  kAwaitingMsg3Grant,
  kAwaitingMsg4,
  kBackoff,
  kConnected,
  kFailed,
};

std::string_view to_string(DevicePhase phase) noexcept;

enum class EventKind {
  kPaged,
  kMsg1,
  kRarMiss,       // preamble not acknowledged, backoff follows
  kMsg2,
  kMsg3,
  kMsg3Collided,  // sent Msg3 on a shared grant, learns it at CRT expiry
  kCrtExpired,    // Msg4 did not arrive in time
  kMsg4,
  kFailed,
};

std::string_view to_string(EventKind kind) noexcept;

struct Event {
  std::int64_t vf = 0;
  std::int64_t device = 0;
  EventKind kind = EventKind::kPaged;

  bool operator==(const Event&) const = default;
};

struct DeviceState {
  std::int64_t id = 0;
  std::size_t subgroup = 0;
  DevicePhase phase = DevicePhase::kIdle;
  std::int64_t attempt = 0;   // 1-based once paged
  std::int64_t preamble = -1;
  std::int64_t paged_vf = 0;
  std::int64_t msg1_vf = 0;
  std::int64_t msg3_vf = 0;
  std::int64_t done_vf = 0;   // VF it connected or failed in

  bool operator==(const DeviceState&) const = default;
};

/// One Monte Carlo replication.
struct McTrace {
  std::string rng_algorithm;
  std::uint64_t seed = 0;
  AccessRecord access;
  /// Devices per preamble for each VF ([vf - 1][preamble]).
  std::vector<std::vector<std::int32_t>> preamble_usage;
  std::vector<DeviceState> devices;
  std::vector<Event> events;
};

/// Simulates every paged device through the random access handshake.
///
/// Per VF: due devices send Msg1 on a uniform preamble; the cohort from k VFs
/// ago gets Msg2 for at most N_RAR of its used preambles (chosen uniformly
/// when over capacity) and the rest back off uniformly over 1..B VFs; Msg3 is
/// served in random order against the UL budget; Msg4 is FIFO by Msg3 VF,
/// ties by device id, against the DL left after Msg2. Devices that shared a
/// preamble collide in Msg3 and retry when the contention timer expires.
McTrace run_replication(const ScenarioConfig& config, const DerivedQuantities& derived,
                        const PagingPlan& plan, std::uint64_t seed);

/// Columns: vf, device, event. Preceded by a header comment naming the
/// generator and seed.
void write_events_csv(std::ostream& out, const McTrace& trace);

}  // namespace critcast
