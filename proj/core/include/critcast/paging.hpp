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

#include "critcast/config.hpp"

namespace critcast {

/// Which devices are paged when. Subgroup q holds group_sizes[q] devices and
/// is paged once, in VF paging_vfs[q] (1-based, strictly increasing).
struct PagingPlan {
  Scheme scheme = Scheme::kNeGP;
  std::vector<std::int64_t> group_sizes;
  std::vector<std::int64_t> paging_vfs;

  std::size_t num_subgroups() const noexcept { return group_sizes.size(); }
  std::int64_t total_devices() const noexcept;
  std::int64_t last_paging_vf() const noexcept {
    return paging_vfs.empty() ? 0 : paging_vfs.back();
  }

  /// Paging matrix entry: devices of subgroup q paged in VF `vf`.
  std::int64_t devices_at(std::int64_t vf, std::size_t q) const noexcept;

  /// Dense paging matrix, row r holding VF r+1 for VFs 1..last_paging_vf().
  std::vector<std::vector<std::int64_t>> matrix() const;
};

PagingPlan build_plan(const ScenarioConfig& config, const DerivedQuantities& derived);

/// CSV with header `vf_index,subgroup,devices`, one row per paged subgroup.
void write_plan_csv(std::ostream& out, const PagingPlan& plan);

}  // namespace critcast
