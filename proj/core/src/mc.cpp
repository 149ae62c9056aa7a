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


#include "critcast/mc.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ostream>
#include <utility>

#include "critcast/errors.hpp"
#include "critcast/fluid.hpp"
#include "critcast/rng.hpp"

namespace critcast {

std::string_view to_string(DevicePhase phase) noexcept {
  switch (phase) {
    case DevicePhase::kIdle: return "idle";
    case DevicePhase::kAwaitingMsg2: return "awaiting_msg2";
    case DevicePhase::kAwaitingMsg3Grant: return "awaiting_msg3_grant";
    case DevicePhase::kAwaitingMsg4: return "awaiting_msg4";
    case DevicePhase::kBackoff: return "backoff";
    case DevicePhase::kConnected: return "connected";
    case DevicePhase::kFailed: return "failed";
  }
  return "unknown";
}

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::kPaged: return "paged";
    case EventKind::kMsg1: return "msg1";
    case EventKind::kRarMiss: return "rar_miss";
    case EventKind::kMsg2: return "msg2";
    case EventKind::kMsg3: return "msg3";
    case EventKind::kMsg3Collided: return "msg3_collided";
    case EventKind::kCrtExpired: return "crt_expired";
    case EventKind::kMsg4: return "msg4";
    case EventKind::kFailed: return "failed";
  }
  return "unknown";
}

namespace {

struct Msg3Entry {
  std::int64_t device;
  bool collided;
};

struct Msg4Entry {
  std::int64_t msg3_vf;
  std::int64_t device;
};

class Replication {
 public:
  Replication(const ScenarioConfig& config, const DerivedQuantities& derived,
              const PagingPlan& plan, std::uint64_t seed)
      : config_(config), derived_(derived), plan_(plan), rng_(seed) {
    trace_.rng_algorithm = std::string(Rng::kAlgorithm);
    trace_.seed = seed;
    const std::size_t subgroups = plan.num_subgroups();
    trace_.access.reset(subgroups);
    for (std::size_t q = 0; q < subgroups; ++q) {
      trace_.access.paging_vfs[q] = plan.paging_vfs[q];
      trace_.access.paged[q] = static_cast<double>(plan.group_sizes[q]);
      for (std::int64_t n = 0; n < plan.group_sizes[q]; ++n) {
        DeviceState d;
        d.id = static_cast<std::int64_t>(trace_.devices.size());
        d.subgroup = q;
        d.paged_vf = plan.paging_vfs[q];
        trace_.devices.push_back(d);
      }
    }
  }

  McTrace run() {
    const std::int64_t cap = config_.horizon.value_or(kMaxHorizonVfs);
    const auto total = static_cast<std::int64_t>(trace_.devices.size());
    while (absorbed_ < total || vf_ < plan_.last_paging_vf()) {
      if (vf_ >= cap) {
        throw HorizonExceeded("Monte Carlo run still has " + std::to_string(total - absorbed_) +
                              " devices in flight at VF " + std::to_string(cap));
      }
      step();
    }
    return std::move(trace_);
  }

 private:
  void log(std::int64_t device, EventKind kind) { trace_.events.push_back({vf_, device, kind}); }

  void retry_at(DeviceState& d, std::int64_t vf) {
    ++d.attempt;
    d.phase = DevicePhase::kBackoff;
    due_[vf].push_back(d.id);
  }

  void absorb(DeviceState& d, DevicePhase phase) {
    d.phase = phase;
    d.done_vf = vf_;
    ++absorbed_;
  }

  void step();

  const ScenarioConfig& config_;
  const DerivedQuantities& derived_;
  const PagingPlan& plan_;
  Rng rng_;
  McTrace trace_;

  std::int64_t vf_ = 0;
  std::int64_t absorbed_ = 0;
  std::map<std::int64_t, std::vector<std::int64_t>> due_;  // VF -> devices sending Msg1
  std::map<std::int64_t, std::vector<std::int64_t>> cohorts_;  // Msg1 VF -> senders
  std::vector<Msg3Entry> pending_msg3_;  // granted this VF, transmit next VF
  std::vector<Msg3Entry> msg3_queue_;
  std::deque<Msg4Entry> msg4_queue_;
};

void Replication::step() {
  ++vf_;
  AccessRecord& access = trace_.access;
  auto& devices = trace_.devices;
  const std::int64_t R = config_.max_retransmissions;
  const std::int64_t C = config_.preamble_pool;

  // Paging.
  for (std::size_t q = 0; q < plan_.num_subgroups(); ++q) {
    if (plan_.paging_vfs[q] != vf_) continue;
    for (auto& d : devices) {
      if (d.subgroup != q) continue;
      d.attempt = 1;
      log(d.id, EventKind::kPaged);
      due_[vf_].push_back(d.id);
    }
  }

  VfLedger& ledger = access.push_vf();
  auto& usage = trace_.preamble_usage.emplace_back(static_cast<std::size_t>(C), 0);

  // Msg1.
  if (auto it = due_.find(vf_); it != due_.end()) {
    std::vector<std::int64_t> senders = std::move(it->second);
    due_.erase(it);
    std::sort(senders.begin(), senders.end());
    auto& cohort = cohorts_[vf_];
    for (const std::int64_t id : senders) {
      DeviceState& d = devices[static_cast<std::size_t>(id)];
      if (d.attempt > R) {
        access.failures[d.subgroup] += 1.0;
        log(id, EventKind::kFailed);
        absorb(d, DevicePhase::kFailed);
        continue;
      }
      d.preamble = static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(C)));
      d.msg1_vf = vf_;
      d.phase = DevicePhase::kAwaitingMsg2;
      ++usage[static_cast<std::size_t>(d.preamble)];
      cohort.push_back(id);
      log(id, EventKind::kMsg1);
    }
    ledger.contenders = static_cast<double>(cohort.size());
    ledger.used_preambles = static_cast<double>(
        std::count_if(usage.begin(), usage.end(), [](std::int32_t n) { return n > 0; }));
    if (cohort.empty()) cohorts_.erase(vf_);
  }

  // Msg2 for the cohort k VFs back.
  std::vector<Msg3Entry> granted;
  if (auto it = cohorts_.find(vf_ - derived_.msg2_wait_vfs); it != cohorts_.end()) {
    const std::vector<std::int64_t> cohort = std::move(it->second);
    const auto& cohort_usage =
        trace_.preamble_usage[static_cast<std::size_t>(it->first - 1)];
    cohorts_.erase(it);
    ledger.rar_sent = true;

    std::vector<std::int64_t> used;
    for (std::int64_t p = 0; p < C; ++p) {
      if (cohort_usage[static_cast<std::size_t>(p)] > 0) used.push_back(p);
    }
    std::vector<bool> acked(static_cast<std::size_t>(C), false);
    const auto capacity = static_cast<std::size_t>(derived_.rar_capacity);
    if (used.size() > capacity) {
      // Partial Fisher-Yates: the first `capacity` entries become a uniform sample.
      for (std::size_t j = 0; j < capacity; ++j) {
        const auto pick = j + rng_.below(used.size() - j);
        std::swap(used[j], used[pick]);
      }
      used.resize(capacity);
    }
    for (const std::int64_t p : used) acked[static_cast<std::size_t>(p)] = true;
    ledger.rar_grants = static_cast<double>(used.size());

    for (const std::int64_t id : cohort) {
      DeviceState& d = devices[static_cast<std::size_t>(id)];
      const auto p = static_cast<std::size_t>(d.preamble);
      const auto r = static_cast<double>(d.attempt);
      if (!acked[p]) {
        access.msg2_fail_count[d.subgroup] += 1.0;
        access.msg2_fail_attempt_sum[d.subgroup] += r;
        log(id, EventKind::kRarMiss);
        retry_at(d, vf_ + 1 + rng_.between(1, derived_.backoff_vfs));
        continue;
      }
      const bool collided = cohort_usage[p] > 1;
      if (collided) {
        access.msg3_coll_count[d.subgroup] += 1.0;
        access.msg3_coll_attempt_sum[d.subgroup] += r;
      }
      d.phase = DevicePhase::kAwaitingMsg3Grant;
      granted.push_back({id, collided});
      log(id, EventKind::kMsg2);
    }
  }

  // Msg3, in random order against the UL budget.
  msg3_queue_.insert(msg3_queue_.end(), pending_msg3_.begin(), pending_msg3_.end());
  pending_msg3_ = std::move(granted);
  for (std::size_t j = msg3_queue_.size(); j > 1; --j) {
    std::swap(msg3_queue_[j - 1], msg3_queue_[rng_.below(j)]);
  }
  ledger.ul_available = config_.ul_budget_per_vf - config_.prach_cost;
  std::size_t served3 = 0;
  std::vector<Msg4Entry> new_msg4;
  for (; served3 < msg3_queue_.size(); ++served3) {
    const Msg3Entry& e = msg3_queue_[served3];
    DeviceState& d = devices[static_cast<std::size_t>(e.device)];
    const double cost = config_.msg3_cost_for(d.subgroup);
    if (ledger.msg3_rbs + cost > ledger.ul_available + 1e-9) break;
    ledger.msg3_rbs += cost;
    d.msg3_vf = vf_;
    d.phase = DevicePhase::kAwaitingMsg4;
    if (e.collided) {
      log(e.device, EventKind::kMsg3Collided);
      retry_at(d, vf_ + derived_.crt_vfs);
    } else {
      log(e.device, EventKind::kMsg3);
      new_msg4.push_back({vf_, e.device});
    }
  }
  msg3_queue_.erase(msg3_queue_.begin(), msg3_queue_.begin() + static_cast<std::ptrdiff_t>(served3));

  // Msg4, FIFO against the DL left after Msg2.
  ledger.dl_available =
      config_.dl_budget_per_vf - (ledger.rar_sent ? config_.rar_cost : 0.0);
  auto& success = access.msg4_success.back();
  while (!msg4_queue_.empty()) {
    const Msg4Entry e = msg4_queue_.front();
    DeviceState& d = devices[static_cast<std::size_t>(e.device)];
    const double cost = config_.msg4_cost_for(d.subgroup);
    if (ledger.msg4_rbs + cost > ledger.dl_available + 1e-9) break;
    msg4_queue_.pop_front();
    ledger.msg4_rbs += cost;
    success[d.subgroup] += 1.0;
    log(e.device, EventKind::kMsg4);
    absorb(d, DevicePhase::kConnected);
  }
  // Contention timers that ran out this VF; the queue is ordered by Msg3 VF.
  while (!msg4_queue_.empty() && vf_ - msg4_queue_.front().msg3_vf >= derived_.crt_vfs) {
    DeviceState& d = devices[static_cast<std::size_t>(msg4_queue_.front().device)];
    msg4_queue_.pop_front();
    log(d.id, EventKind::kCrtExpired);
    retry_at(d, vf_ + 1);
  }
  std::sort(new_msg4.begin(), new_msg4.end(),
            [](const Msg4Entry& a, const Msg4Entry& b) { return a.device < b.device; });
  msg4_queue_.insert(msg4_queue_.end(), new_msg4.begin(), new_msg4.end());
}

}  // namespace

McTrace run_replication(const ScenarioConfig& config, const DerivedQuantities& derived,
                        const PagingPlan& plan, std::uint64_t seed) {
  return Replication(config, derived, plan, seed).run();
}

void write_events_csv(std::ostream& out, const McTrace& trace) {
  out << "# critcast-mc-events v1 rng=" << trace.rng_algorithm << " seed=" << trace.seed << '\n'
      << "vf,device,event\n";
  for (const Event& e : trace.events) {
    out << e.vf << ',' << e.device << ',' << to_string(e.kind) << '\n';
  }
}

}  // namespace critcast
