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

#include <cmath>
#include <cstdint>

namespace critcast {

/// The single rounding convention used for every bracketed model quantity:
/// round half away from zero.
inline double round_half_away(double x) noexcept { return std::round(x); }

/// Integer ceiling of a ratio of positive durations, tolerant to the
/// representation error of values like 48.0 / 5.0.
inline std::int64_t ceil_ratio(double num, double den) noexcept {
  const double q = num / den;
  const double nearest = std::round(q);
  if (std::abs(q - nearest) < 1e-9) return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::ceil(q));
}

}  // namespace critcast
