// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

namespace otfs::stats {

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for k successes in n trials.
inline std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = kZ95) {
  if (n == 0) return {0.0, 1.0};
  const auto nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// True unless p_b exceeds p_a by a margin that a two-sided pooled
/// two-proportion z-test calls significant at the given z.
inline bool not_significantly_below(double p_a, double p_b, std::size_t n, double z = kZ95) {
  if (p_a >= p_b) return true;
  const double pooled = 0.5 * (p_a + p_b);
  const double se = std::sqrt(pooled * (1.0 - pooled) * 2.0 / static_cast<double>(n));
  return p_b - p_a <= z * se;
}

}  // namespace otfs::stats
