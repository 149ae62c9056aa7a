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
#include <vector>

#include "critcast/access.hpp"
#include "critcast/config.hpp"

namespace critcast {

/// One SC-PTM transmission of the critical payload.
struct PtmTransmission {
  std::int64_t index = 0;     // s, 1-based
  std::int64_t start_vf = 0;  // i_s
  std::int64_t duration_vfs = 0;
  std::vector<double> members;    // devices served, per paging subgroup
  std::vector<double> residuals;  // payload still owed after each VF
  std::vector<double> rbs;        // DL RBs spent in each VF

  double total_members() const noexcept;
  std::int64_t end_vf() const noexcept { return start_vf + duration_vfs - 1; }
};

struct PtmSchedule {
  std::vector<PtmTransmission> transmissions;
  std::int64_t interval_vfs = 0;
  double payload = 0.0;

  bool empty() const noexcept { return transmissions.empty(); }
  /// Last VF any transmission occupies, or 0 without transmissions.
  std::int64_t end_vf() const noexcept;
  /// DL RBs the multicast takes in `vf`.
  double rbs_at(std::int64_t vf) const noexcept;
};

/// Payload left after one VF offering `dl_available` RBs.
inline double drain_payload(double residual, double dl_available) noexcept {
  return residual > dl_available ? residual - dl_available : 0.0;
}

/// Places SC-PTM transmissions over a finished access record.
///
/// The first candidate start is the first paging VF plus the offset that lets
/// the first subgroup finish contention-free; later candidates follow at the
/// scheme's multicast interval. Each transmission carries the Msg4 successes
/// of the VFs since the previous one, drains the payload using whatever DL
/// the random access left over, and never overlaps its successor. A
/// candidate with no new members is skipped.
PtmSchedule schedule(const AccessRecord& access, const ScenarioConfig& config,
                     const DerivedQuantities& derived);

/// Columns: s, start_vf, duration_vfs, members.
void write_schedule_csv(std::ostream& out, const PtmSchedule& schedule);

}  // namespace critcast
