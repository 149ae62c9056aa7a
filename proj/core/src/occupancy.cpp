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

#include "critcast/occupancy.hpp"

#include <algorithm>
#include <cmath>

#include "critcast/errors.hpp"
#include "critcast/rounding.hpp"

namespace critcast {

namespace {

std::int64_t support_top(double contenders, std::int64_t pool) {
  // ceil() with slack so 3.0000000001 from accumulated sums stays 3.
  const auto top = static_cast<std::int64_t>(std::ceil(contenders - 1e-9));
  return std::clamp<std::int64_t>(top, 1, pool);
}

}  // namespace

std::vector<double> occupancy_distribution(double contenders, std::int64_t pool) {
  if (!(contenders > 0)) throw ContendersZero();
  if (pool < 1) throw InvalidParameter("preamble_pool", "must be >= 1");

  const std::int64_t top = support_top(contenders, pool);
  const auto C = static_cast<long double>(pool);
  const auto alpha = static_cast<long double>(contenders);

  // power[m] = (m / C)^alpha, the chance that every contender lands in a
  // fixed set of m preambles.
  std::vector<long double> power(static_cast<std::size_t>(top) + 1);
  for (std::int64_t m = 0; m <= top; ++m) {
    power[static_cast<std::size_t>(m)] = m == 0 ? 0.0L : std::pow(m / C, alpha);
  }

  std::vector<double> q(static_cast<std::size_t>(top));
  long double choose_pool_c = 1.0L;  // binom(C, c), built incrementally
  for (std::int64_t c = 1; c <= top; ++c) {
    choose_pool_c = choose_pool_c * static_cast<long double>(pool - c + 1) / c;
    long double sum = 0.0L;
    long double choose_c_j = 1.0L;  // binom(c, j)
    for (std::int64_t j = 0; j <= c; ++j) {
      const long double term = choose_c_j * power[static_cast<std::size_t>(c - j)];
      sum += (j % 2 == 0) ? term : -term;
      choose_c_j = choose_c_j * static_cast<long double>(c - j) / (j + 1);
    }
    const long double value = choose_pool_c * sum;
    q[static_cast<std::size_t>(c - 1)] = static_cast<double>(std::clamp(value, 0.0L, 1.0L));
  }
  return q;
}

double mean_used_preambles(double contenders, std::int64_t pool) {
  const auto q = occupancy_distribution(contenders, pool);
  double mass = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    mass += q[i];
    weighted += static_cast<double>(i + 1) * q[i];
  }
  if (!(mass > 0)) return static_cast<double>(q.size());
  return weighted / mass;
}

double expected_used_preambles(double contenders, std::int64_t pool) {
  return std::max(1.0, round_half_away(mean_used_preambles(contenders, pool)));
}

double singleton_probability(double contenders, std::int64_t pool) {
  if (pool < 1) throw InvalidParameter("preamble_pool", "must be >= 1");
  const double others = std::max(0.0, contenders - 1.0);
  if (others == 0.0) return 1.0;
  return std::pow(1.0 - 1.0 / static_cast<double>(pool), others);
}

}  // namespace critcast
