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

#include "critcast/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "critcast/errors.hpp"
#include "critcast/format.hpp"
#include "critcast/occupancy.hpp"
#include "critcast/rounding.hpp"

namespace critcast {

namespace {

// Expected counts below this are treated as nobody.
constexpr double kEps = 1e-9;

/// Fraction of `devices` admitted when they need `rbs` against `budget`:
/// everyone if it fits, otherwise the rounded proportional share, trimmed
/// down if rounding up would overrun the budget.
double admitted_fraction(double devices, double rbs, double budget) {
  if (devices <= kEps || rbs <= budget + kEps) return 1.0;
  const double exact = devices * budget / rbs;
  double admitted = round_half_away(exact);
  if (admitted * rbs / devices > budget + kEps) admitted = std::floor(exact);
  return std::clamp(admitted / devices, 0.0, 1.0);
}

template <typename CostFn>
double rb_demand(const AttemptGrid& grid, CostFn cost) {
  double rbs = 0.0;
  for (std::int64_t r = 1; r <= grid.max_attempts(); ++r) {
    for (std::size_t q = 0; q < grid.subgroups(); ++q) rbs += grid.at(r, q) * cost(q);
  }
  return rbs;
}

}  // namespace

double AttemptGrid::active_total() const {
  double sum = 0.0;
  for (std::int64_t r = 1; r <= attempts_; ++r) sum += attempt_total(r);
  return sum;
}

double AttemptGrid::attempt_total(std::int64_t r) const {
  double sum = 0.0;
  for (std::size_t q = 0; q < subgroups_; ++q) sum += at(r, q);
  return sum;
}

double AttemptGrid::total() const { return active_total() + attempt_total(attempts_ + 1); }

AttemptGrid& AttemptGrid::operator+=(const AttemptGrid& other) {
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
  return *this;
}

AttemptGrid& AttemptGrid::operator-=(const AttemptGrid& other) {
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] -= other.cells_[i];
  return *this;
}

AttemptGrid& AttemptGrid::operator*=(double factor) {
  for (double& c : cells_) c *= factor;
  return *this;
}

FluidEngine::FluidEngine(ScenarioConfig config, DerivedQuantities derived, PagingPlan plan)
    : config_(std::move(config)), derived_(derived), plan_(std::move(plan)) {
  const auto subgroups = plan_.num_subgroups();
  pending_clean_ = pending_collided_ = zero_grid();
  queue_clean_ = queue_collided_ = zero_grid();
  msg4_ages_.assign(static_cast<std::size_t>(derived_.crt_vfs), zero_grid());

  trace_.max_attempts = config_.max_retransmissions;
  trace_.subgroups = subgroups;
  trace_.access.reset(subgroups);
  for (std::size_t q = 0; q < subgroups; ++q) {
    trace_.access.paging_vfs[q] = plan_.paging_vfs[q];
    trace_.access.paged[q] = static_cast<double>(plan_.group_sizes[q]);
  }
  // Touch every cost entry now so a wrong-length cost vector fails early.
  for (std::size_t q = 0; q < subgroups; ++q) {
    (void)config_.msg3_cost_for(q);
    (void)config_.msg4_cost_for(q);
  }
}

AttemptGrid& FluidEngine::arrivals_at(std::int64_t vf) {
  auto it = arrivals_.find(vf);
  if (it == arrivals_.end()) it = arrivals_.emplace(vf, zero_grid()).first;
  return it->second;
}

const FluidVf* FluidEngine::vf_state(std::int64_t vf) const {
  if (vf < 1 || vf > static_cast<std::int64_t>(trace_.vfs.size())) return nullptr;
  return &trace_.vfs[static_cast<std::size_t>(vf - 1)];
}

double FluidEngine::in_flight() const {
  double sum = pending_clean_.total() + pending_collided_.total() + queue_clean_.total() +
               queue_collided_.total();
  for (const auto& age : msg4_ages_) sum += age.total();
  for (const auto& [vf, grid] : arrivals_) sum += grid.total();
  // Msg1 senders of the last k VFs have not heard Msg2 yet.
  for (std::int64_t v = vf_ - derived_.msg2_wait_vfs + 1; v <= vf_; ++v) {
    if (const FluidVf* s = vf_state(v)) sum += s->total_contenders;
  }
  for (std::size_t q = 0; q < plan_.num_subgroups(); ++q) {
    if (plan_.paging_vfs[q] > vf_) sum += static_cast<double>(plan_.group_sizes[q]);
  }
  return sum;
}

bool FluidEngine::settled() const {
  return vf_ >= plan_.last_paging_vf() && in_flight() < kEps;
}

const FluidVf& FluidEngine::advance_vf() {
  if (vf_ >= kMaxHorizonVfs) {
    throw HorizonExceeded("fluid run did not settle within " + std::to_string(kMaxHorizonVfs) +
                          " VFs");
  }
  ++vf_;
  const std::int64_t R = config_.max_retransmissions;
  const std::size_t Q = plan_.num_subgroups();
  AccessRecord& access = trace_.access;

  FluidVf state;
  state.vf = vf_;

  // Arrivals: first attempts from paging plus retries scheduled earlier.
  if (auto it = arrivals_.find(vf_); it != arrivals_.end()) {
    state.contenders = std::move(it->second);
    arrivals_.erase(it);
  } else {
    state.contenders = zero_grid();
  }
  for (std::size_t q = 0; q < Q; ++q) {
    if (plan_.paging_vfs[q] == vf_) {
      state.contenders.at(1, q) += static_cast<double>(plan_.group_sizes[q]);
    }
    access.failures[q] += state.contenders.at(R + 1, q);
  }
  state.total_contenders = state.contenders.active_total();
  if (state.total_contenders > kEps) {
    state.used_preambles = expected_used_preambles(state.total_contenders, config_.preamble_pool);
    state.singleton_prob = singleton_probability(state.total_contenders, config_.preamble_pool);
  }

  // Msg2 for the cohort that sent Msg1 k VFs ago. Granted devices on a
  // shared preamble collide at Msg3 with probability 1 - p of that cohort.
  AttemptGrid new_clean = zero_grid();
  AttemptGrid new_collided = zero_grid();
  state.msg2_ok = zero_grid();
  double rar_grants = 0.0;
  if (const FluidVf* src = vf_state(vf_ - derived_.msg2_wait_vfs);
      src != nullptr && src->total_contenders > kEps) {
    state.rar_sent = true;
    const auto capacity = static_cast<double>(derived_.rar_capacity);
    double fraction = 1.0;
    if (src->used_preambles > capacity) {
      fraction = std::min(
          1.0, round_half_away(src->total_contenders * capacity / src->used_preambles) /
                   src->total_contenders);
    }
    rar_grants = std::min(src->used_preambles, capacity);
    const double p = src->singleton_prob;
    const auto B = static_cast<double>(derived_.backoff_vfs);
    for (std::int64_t r = 1; r <= R; ++r) {
      for (std::size_t q = 0; q < Q; ++q) {
        const double sent = src->contenders.at(r, q);
        if (sent <= 0.0) continue;
        const double granted = sent * fraction;
        const double missed = sent - granted;
        state.msg2_ok.at(r, q) = granted;
        if (missed > 0.0) {
          access.msg2_fail_count[q] += missed;
          access.msg2_fail_attempt_sum[q] += static_cast<double>(r) * missed;
          for (std::int64_t j = 1; j <= derived_.backoff_vfs; ++j) {
            arrivals_at(vf_ + 1 + j).at(r + 1, q) += missed / B;
          }
        }
        const double collided = granted * (1.0 - p);
        new_clean.at(r, q) = granted - collided;
        new_collided.at(r, q) = collided;
        access.msg3_coll_count[q] += collided;
        access.msg3_coll_attempt_sum[q] += static_cast<double>(r) * collided;
      }
    }
  }

  // Msg3: last VF's Msg2 receivers join the backlog, then the UL gate.
  queue_clean_ += pending_clean_;
  queue_collided_ += pending_collided_;
  pending_clean_ = std::move(new_clean);
  pending_collided_ = std::move(new_collided);

  state.msg3_queue = queue_clean_;
  state.msg3_queue += queue_collided_;
  const auto msg3_cost = [this](std::size_t q) { return config_.msg3_cost_for(q); };
  const double msg3_devices = state.msg3_queue.active_total();
  const double msg3_demand = rb_demand(state.msg3_queue, msg3_cost);
  state.ul_available = config_.ul_budget_per_vf - config_.prach_cost;
  const double msg3_fraction = admitted_fraction(msg3_devices, msg3_demand, state.ul_available);
  AttemptGrid sent_clean = queue_clean_ * msg3_fraction;
  AttemptGrid sent_collided = queue_collided_ * msg3_fraction;
  queue_clean_ -= sent_clean;
  queue_collided_ -= sent_collided;
  state.msg3_ok = sent_clean;
  state.msg3_ok += sent_collided;
  state.msg3_rbs = msg3_demand * msg3_fraction;

  // Collided devices learn it when the contention resolution timer expires.
  {
    AttemptGrid& retry = arrivals_at(vf_ + derived_.crt_vfs);
    for (std::int64_t r = 1; r <= R; ++r) {
      for (std::size_t q = 0; q < Q; ++q) retry.at(r + 1, q) += sent_collided.at(r, q);
    }
  }

  // Msg4 against the DL left after Msg2, shared across every waiting age.
  state.dl_available = config_.dl_budget_per_vf - (state.rar_sent ? config_.rar_cost : 0.0);
  const auto msg4_cost = [this](std::size_t q) { return config_.msg4_cost_for(q); };
  state.msg4_queue = zero_grid();
  for (const auto& age : msg4_ages_) state.msg4_queue += age;
  const double msg4_devices = state.msg4_queue.active_total();
  const double msg4_demand = rb_demand(state.msg4_queue, msg4_cost);
  const double msg4_fraction = admitted_fraction(msg4_devices, msg4_demand, state.dl_available);
  state.msg4_ok = state.msg4_queue * msg4_fraction;
  state.msg4_rbs = msg4_demand * msg4_fraction;

  VfLedger& ledger = access.push_vf();
  auto& success = access.msg4_success.back();
  for (std::int64_t r = 1; r <= R; ++r) {
    for (std::size_t q = 0; q < Q; ++q) success[q] += state.msg4_ok.at(r, q);
  }

  // Devices whose timer ran out without Msg4 retry immediately.
  {
    const AttemptGrid expired = msg4_ages_.back() * (1.0 - msg4_fraction);
    AttemptGrid& retry = arrivals_at(vf_ + 1);
    for (std::int64_t r = 1; r <= R; ++r) {
      for (std::size_t q = 0; q < Q; ++q) retry.at(r + 1, q) += expired.at(r, q);
    }
  }
  for (std::size_t a = msg4_ages_.size() - 1; a > 0; --a) {
    msg4_ages_[a] = msg4_ages_[a - 1] * (1.0 - msg4_fraction);
  }
  msg4_ages_.front() = std::move(sent_clean);

  ledger.contenders = state.total_contenders;
  ledger.used_preambles = state.used_preambles;
  ledger.rar_grants = rar_grants;
  ledger.rar_sent = state.rar_sent;
  ledger.msg3_rbs = state.msg3_rbs;
  ledger.ul_available = state.ul_available;
  ledger.dl_available = state.dl_available;
  ledger.msg4_rbs = state.msg4_rbs;

  trace_.vfs.push_back(std::move(state));
  return trace_.vfs.back();
}

FluidTrace FluidEngine::take_trace() {
  trace_.in_flight = in_flight();
  return std::move(trace_);
}

FluidTrace run_fluid(const ScenarioConfig& config, const DerivedQuantities& derived,
                     const PagingPlan& plan) {
  FluidEngine engine(config, derived, plan);
  const std::int64_t cap = config.horizon.value_or(kMaxHorizonVfs);
  while (!engine.settled()) {
    if (engine.current_vf() >= cap) {
      throw HorizonExceeded("fluid run still has " + format_number(engine.in_flight()) +
                            " devices in flight at VF " + std::to_string(cap));
    }
    engine.advance_vf();
  }
  return engine.take_trace();
}

void write_fluid_csv(std::ostream& out, const FluidTrace& trace) {
  out << "# critcast-fluid-trace v1\n"
      << "vf,r,alpha,alpha_star,beta,beta_star,gamma,gamma_star,"
         "alpha_total,used_preambles,p_single,ul_available,dl_available,msg3_rbs,msg4_rbs,rar\n";
  for (const FluidVf& s : trace.vfs) {
    for (std::int64_t r = 1; r <= trace.max_attempts + 1; ++r) {
      out << s.vf << ',' << r << ',' << format_number(s.contenders.attempt_total(r)) << ','
          << format_number(s.msg2_ok.attempt_total(r)) << ','
          << format_number(s.msg3_queue.attempt_total(r)) << ','
          << format_number(s.msg3_ok.attempt_total(r)) << ','
          << format_number(s.msg4_queue.attempt_total(r)) << ','
          << format_number(s.msg4_ok.attempt_total(r)) << ','
          << format_number(s.total_contenders) << ',' << format_number(s.used_preambles) << ','
          << format_number(s.singleton_prob) << ',' << format_number(s.ul_available) << ','
          << format_number(s.dl_available) << ',' << format_number(s.msg3_rbs) << ','
          << format_number(s.msg4_rbs) << ',' << (s.rar_sent ? 1 : 0) << '\n';
    }
  }
}

}  // namespace critcast
