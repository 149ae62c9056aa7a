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

#include "critcast/paging.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace critcast {

std::int64_t PagingPlan::total_devices() const noexcept {
  return std::accumulate(group_sizes.begin(), group_sizes.end(), std::int64_t{0});
}

std::int64_t PagingPlan::devices_at(std::int64_t vf, std::size_t q) const noexcept {
  if (q >= paging_vfs.size() || paging_vfs[q] != vf) return 0;
  return group_sizes[q];
}

std::vector<std::vector<std::int64_t>> PagingPlan::matrix() const {
  const auto rows = static_cast<std::size_t>(last_paging_vf());
  std::vector<std::vector<std::int64_t>> m(rows, std::vector<std::int64_t>(num_subgroups(), 0));
  for (std::size_t q = 0; q < num_subgroups(); ++q) {
    m[static_cast<std::size_t>(paging_vfs[q] - 1)][q] = group_sizes[q];
  }
  return m;
}

PagingPlan build_plan(const ScenarioConfig& config, const DerivedQuantities& derived) {
  PagingPlan plan;
  plan.scheme = config.scheme;
  if (config.num_devices == 0) return plan;

  // GP pages everyone in one message; its "interval" is never used.
  const std::int64_t cap = std::max<std::int64_t>(1, derived.group_size);
  const std::int64_t step = std::max<std::int64_t>(1, derived.paging_interval_vfs);

  std::int64_t remaining = config.num_devices;
  std::int64_t vf = 1;
  while (remaining > 0) {
    const std::int64_t n = std::min(cap, remaining);
    plan.group_sizes.push_back(n);
    plan.paging_vfs.push_back(vf);
    remaining -= n;
    vf += step;
  }
  return plan;
}

void write_plan_csv(std::ostream& out, const PagingPlan& plan) {
  out << "vf_index,subgroup,devices\n";
  for (std::size_t q = 0; q < plan.num_subgroups(); ++q) {
    out << plan.paging_vfs[q] << ',' << (q + 1) << ',' << plan.group_sizes[q] << '\n';
  }
}

}  // namespace critcast
