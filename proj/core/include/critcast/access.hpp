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
#include <vector>

namespace critcast {

/// Radio resources one VF spent on the random access stage.
struct VfLedger {
  double contenders = 0.0;      // Msg1 senders (attempts 1..R)
  double used_preambles = 0.0;  // distinct preambles (expected, in the fluid)
  double rar_grants = 0.0;      // preambles acknowledged by this VF's Msg2
  bool rar_sent = false;
  double msg3_rbs = 0.0;
  double ul_available = 0.0;    // UL left for Msg3 once the PRACH is reserved
  double dl_available = 0.0;    // DL left once Msg2 is charged
  double msg4_rbs = 0.0;
};

/// What the random access stage produced, in the form both engines share.
/// The fluid engine fills it with expected counts, the Monte Carlo
/// simulator with integer counts; the scheduler and the metrics only ever
/// read this.
struct AccessRecord {
  std::vector<std::int64_t> paging_vfs;  // per subgroup
  std::vector<double> paged;             // per subgroup

  std::vector<VfLedger> vfs;                      // [vf - 1]
  std::vector<std::vector<double>> msg4_success;  // [vf - 1][subgroup]

  std::vector<double> failures;  // per subgroup, devices that ran out of attempts
  // Per subgroup: Msg2 misses and Msg3 collisions, plain and weighted by the
  // attempt number on which they happened.
  std::vector<double> msg2_fail_count;
  std::vector<double> msg2_fail_attempt_sum;
  std::vector<double> msg3_coll_count;
  std::vector<double> msg3_coll_attempt_sum;

  /// Sizes every per-subgroup vector for `subgroups` entries.
  void reset(std::size_t subgroups);
  /// Appends one VF (ledger plus an all-zero success row) and returns it.
  VfLedger& push_vf();

  std::size_t num_subgroups() const noexcept { return paged.size(); }
  std::int64_t num_vfs() const noexcept { return static_cast<std::int64_t>(vfs.size()); }
  double total_paged() const noexcept;
  double total_success() const noexcept;
  double total_failures() const noexcept;
  double success_of(std::size_t subgroup) const noexcept;
  /// Last VF with Msg4 successes above `eps`, or 0.
  std::int64_t last_success_vf(double eps = 1e-9) const noexcept;
};

}  // namespace critcast
