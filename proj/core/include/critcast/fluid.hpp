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
#include <map>
#include <vector>

#include "critcast/access.hpp"
#include "critcast/config.hpp"
#include "critcast/paging.hpp"

namespace critcast {

/// Hard cap on the number of VFs any run may take.
inline constexpr std::int64_t kMaxHorizonVfs = 100'000;

/// Expected device counts indexed by attempt r in 1..R+1 and subgroup q.
/// Row 0 is unused so that r indexes directly.
class AttemptGrid {
 public:
  AttemptGrid() = default;
  AttemptGrid(std::int64_t max_attempts, std::size_t subgroups)
      : attempts_(max_attempts), subgroups_(subgroups),
        cells_(static_cast<std::size_t>(max_attempts + 2) * subgroups, 0.0) {}

  double& at(std::int64_t r, std::size_t q) {
    return cells_[static_cast<std::size_t>(r) * subgroups_ + q];
  }
  double at(std::int64_t r, std::size_t q) const {
    return cells_[static_cast<std::size_t>(r) * subgroups_ + q];
  }

  std::int64_t max_attempts() const noexcept { return attempts_; }
  std::size_t subgroups() const noexcept { return subgroups_; }
  bool empty() const noexcept { return cells_.empty(); }

  /// Sum over attempts 1..R (the ones that still contend).
  double active_total() const;
  /// Sum over attempt r, all subgroups.
  double attempt_total(std::int64_t r) const;
  /// Sum over every attempt including the terminal R+1 row.
  double total() const;

  AttemptGrid& operator+=(const AttemptGrid& other);
  AttemptGrid& operator-=(const AttemptGrid& other);
  AttemptGrid& operator*=(double factor);
  friend AttemptGrid operator*(AttemptGrid grid, double factor) { return grid *= factor; }

 private:
  std::int64_t attempts_ = 0;
  std::size_t subgroups_ = 0;
  std::vector<double> cells_;
};

/// State of one VF of the expected-value recursion.
struct FluidVf {
  std::int64_t vf = 0;
  AttemptGrid contenders;   // Msg1 senders; row R+1 holds devices out of attempts
  AttemptGrid msg2_ok;      // Msg2 receivers (cohort of VF - k)
  AttemptGrid msg3_queue;   // devices holding a Msg3 grant
  AttemptGrid msg3_ok;      // devices that sent Msg3
  AttemptGrid msg4_queue;   // awaiting Msg4, summed over contention-resolution ages
  AttemptGrid msg4_ok;      // Msg4 receivers, summed over ages
  double total_contenders = 0.0;
  double used_preambles = 0.0;
  double singleton_prob = 1.0;
  double ul_available = 0.0;
  double dl_available = 0.0;
  double msg3_rbs = 0.0;
  double msg4_rbs = 0.0;
  bool rar_sent = false;
};

/// Complete expected-value evolution of one scenario run.
struct FluidTrace {
  std::int64_t max_attempts = 0;
  std::size_t subgroups = 0;
  std::vector<FluidVf> vfs;
  AccessRecord access;
  /// Devices still in flight when the run stopped (zero after settling).
  double in_flight = 0.0;
};

/// Steps the expected-value recursion one VF at a time.
///
/// Within VF i, in order: arrivals (paging plus scheduled retries), preamble
/// statistics, Msg2 for the cohort of VF i-k, Msg3 against the UL budget,
/// Msg4 against the DL budget left after Msg2. Admitted counts at the three
/// capacity gates are rounded half away from zero on the aggregate and shared
/// proportionally.
class FluidEngine {
 public:
  FluidEngine(ScenarioConfig config, DerivedQuantities derived, PagingPlan plan);

  /// Computes the next VF and returns it. Throws HorizonExceeded past the cap.
  const FluidVf& advance_vf();

  /// True once every paged device has either connected or run out of attempts.
  bool settled() const;
  double in_flight() const;
  std::int64_t current_vf() const noexcept { return vf_; }

  const FluidTrace& trace() const noexcept { return trace_; }
  FluidTrace take_trace();

 private:
  AttemptGrid zero_grid() const { return {config_.max_retransmissions, plan_.num_subgroups()}; }
  AttemptGrid& arrivals_at(std::int64_t vf);
  const FluidVf* vf_state(std::int64_t vf) const;

  ScenarioConfig config_;
  DerivedQuantities derived_;
  PagingPlan plan_;
  std::int64_t vf_ = 0;

  std::map<std::int64_t, AttemptGrid> arrivals_;  // scheduled Msg1 by VF
  AttemptGrid pending_clean_, pending_collided_;  // Msg2 receivers, Msg3 next VF
  AttemptGrid queue_clean_, queue_collided_;      // Msg3 backlog
  std::vector<AttemptGrid> msg4_ages_;            // [age - 1], age 1..M
  FluidTrace trace_;
};

/// Runs to the automatic horizon (or the configured one) and returns the
/// trace. Throws HorizonExceeded if the run does not settle in time.
FluidTrace run_fluid(const ScenarioConfig& config, const DerivedQuantities& derived,
                     const PagingPlan& plan);

/// One row per (vf, attempt) aggregated over subgroups, plus per-VF scalars.
void write_fluid_csv(std::ostream& out, const FluidTrace& trace);

}  // namespace critcast
