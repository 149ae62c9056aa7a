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


#include "critcast/scptm.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "critcast/format.hpp"

namespace critcast {

namespace {

constexpr double kEps = 1e-9;

// DL left for multicast in `vf` after Msg2 and Msg4 took their share.
double dl_for_multicast(const AccessRecord& access, const ScenarioConfig& config,
                        std::int64_t vf) {
  if (vf < 1 || vf > access.num_vfs()) return config.dl_budget_per_vf;
  const VfLedger& ledger = access.vfs[static_cast<std::size_t>(vf - 1)];
  return std::max(0.0, ledger.dl_available - ledger.msg4_rbs);
}

}  // namespace

double PtmTransmission::total_members() const noexcept {
  return std::accumulate(members.begin(), members.end(), 0.0);
}

std::int64_t PtmSchedule::end_vf() const noexcept {
  return transmissions.empty() ? 0 : transmissions.back().end_vf();
}

double PtmSchedule::rbs_at(std::int64_t vf) const noexcept {
  for (const auto& t : transmissions) {
    if (vf >= t.start_vf && vf <= t.end_vf()) {
      return t.rbs[static_cast<std::size_t>(vf - t.start_vf)];
    }
  }
  return 0.0;
}

PtmSchedule schedule(const AccessRecord& access, const ScenarioConfig& config,
                     const DerivedQuantities& derived) {
  PtmSchedule out;
  out.interval_vfs = derived.ptm_interval_vfs;
  out.payload = config.multicast_payload;

  const std::int64_t last_success = access.last_success_vf(kEps);
  if (access.paging_vfs.empty() || last_success == 0) return out;

  const std::size_t subgroups = access.num_subgroups();
  std::int64_t window_begin = 1;
  std::int64_t candidate = access.paging_vfs.front() + derived.first_ptm_offset_vfs;
  while (window_begin <= last_success) {
    std::vector<double> members(subgroups, 0.0);
    const std::int64_t window_end = std::min(candidate - 1, access.num_vfs());
    for (std::int64_t v = window_begin; v <= window_end; ++v) {
      const auto& row = access.msg4_success[static_cast<std::size_t>(v - 1)];
      for (std::size_t q = 0; q < subgroups; ++q) members[q] += row[q];
    }
    if (std::accumulate(members.begin(), members.end(), 0.0) <= kEps) {
      candidate += out.interval_vfs;
      continue;
    }

    PtmTransmission t;
    t.index = static_cast<std::int64_t>(out.transmissions.size()) + 1;
    t.start_vf = candidate;
    t.members = std::move(members);
    double residual = config.multicast_payload;
    while (residual > 0.0) {
      const double available = dl_for_multicast(access, config, candidate + t.duration_vfs);
      const double next = drain_payload(residual, available);
      t.rbs.push_back(residual - next);
      t.residuals.push_back(next);
      residual = next;
      ++t.duration_vfs;
    }
    window_begin = candidate;
    candidate += std::max(out.interval_vfs, t.duration_vfs);
    out.transmissions.push_back(std::move(t));
  }
  return out;
}

void write_schedule_csv(std::ostream& out, const PtmSchedule& schedule) {
  out << "s,start_vf,duration_vfs,members\n";
  for (const auto& t : schedule.transmissions) {
    out << t.index << ',' << t.start_vf << ',' << t.duration_vfs << ','
        << format_number(t.total_members()) << '\n';
  }
}

}  // namespace critcast
