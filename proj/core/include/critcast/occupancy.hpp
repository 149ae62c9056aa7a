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

// Preamble occupancy: `contenders` devices each pick one of `pool` preambles
// uniformly at random. Contenders may be fractional (expected counts); the
// formulas are evaluated with a real exponent.

/// Probability that exactly c preambles are used, for c = 1..min(pool,
/// ceil(contenders)); element 0 holds c = 1. Evaluated by inclusion-exclusion
/// and clamped to [0, 1]. Throws ContendersZero when contenders <= 0.
std::vector<double> occupancy_distribution(double contenders, std::int64_t pool);

/// Mean number of used preambles over the truncated support, normalized by
/// the support mass. Not rounded.
double mean_used_preambles(double contenders, std::int64_t pool);

/// mean_used_preambles rounded half away from zero; at least 1.
double expected_used_preambles(double contenders, std::int64_t pool);

/// Probability that a given contender's preamble is picked by nobody else.
/// Equals 1 for contenders <= 1.
double singleton_probability(double contenders, std::int64_t pool);

}  // namespace critcast
