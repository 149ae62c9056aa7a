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

#include "critcast/access.hpp"

#include <numeric>

namespace critcast {

void AccessRecord::reset(std::size_t subgroups) {
  paging_vfs.assign(subgroups, 0);
  paged.assign(subgroups, 0.0);
  vfs.clear();
  msg4_success.clear();
  failures.assign(subgroups, 0.0);
  msg2_fail_count.assign(subgroups, 0.0);
  msg2_fail_attempt_sum.assign(subgroups, 0.0);
  msg3_coll_count.assign(subgroups, 0.0);
  msg3_coll_attempt_sum.assign(subgroups, 0.0);
}

VfLedger& AccessRecord::push_vf() {
  msg4_success.emplace_back(num_subgroups(), 0.0);
  return vfs.emplace_back();
}

double AccessRecord::total_paged() const noexcept {
  return std::accumulate(paged.begin(), paged.end(), 0.0);
}

double AccessRecord::total_success() const noexcept {
  double sum = 0.0;
  for (const auto& row : msg4_success) sum = std::accumulate(row.begin(), row.end(), sum);
  return sum;
}

double AccessRecord::total_failures() const noexcept {
  return std::accumulate(failures.begin(), failures.end(), 0.0);
}

double AccessRecord::success_of(std::size_t subgroup) const noexcept {
  double sum = 0.0;
  for (const auto& row : msg4_success) sum += row[subgroup];
  return sum;
}

std::int64_t AccessRecord::last_success_vf(double eps) const noexcept {
  for (std::size_t v = msg4_success.size(); v > 0; --v) {
    const auto& row = msg4_success[v - 1];
    if (std::accumulate(row.begin(), row.end(), 0.0) > eps) return static_cast<std::int64_t>(v);
  }
  return 0;
}

}  // namespace critcast
