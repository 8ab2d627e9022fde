// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "otfs/params.hpp"
#include "otfs/types.hpp"

namespace otfs {

/// Uniform axis: bin i sits at origin + i * step. A periodic axis spans
/// exactly one period of the underlying statistic (size * step).
struct MapAxis {
  double origin = 0.0;
  double step = 0.0;
  std::size_t size = 0;
  bool periodic = false;

  double value(std::size_t i) const { return origin + step * static_cast<double>(i); }
  double period() const { return step * static_cast<double>(size); }
  /// Nearest bin to x, wrapping on periodic axes. Throws std::out_of_range
  /// when x falls outside a non-periodic axis (half a bin of slack at each end).
  std::size_t nearest_bin(double x) const;
};

/// Nonnegative map over (delay, Doppler); rows are delay bins, columns Doppler bins.
/// Both the GLRT statistic and the 2-D FFT periodogram use this layout.
struct DelayDopplerMap {
  RMatrix values;
  MapAxis delay;
  MapAxis doppler;
  CMatrix alpha;  // optional per-cell gain estimates (empty unless requested)
};

using StatisticMap = DelayDopplerMap;
using RangeDopplerMap = DelayDopplerMap;

/// CSV with header "delay_bin,doppler_bin,value", one line per cell.
void write_map_csv(std::ostream& out, const DelayDopplerMap& map);
void write_map_binary(std::ostream& out, const DelayDopplerMap& map);

struct ProfilePoint {
  double axis_value = 0.0;  // range in m or velocity in m/s
  double value = 0.0;
};

/// Map column at the Doppler bin nearest to velocity_mps, indexed by range.
std::vector<ProfilePoint> range_profile(const DelayDopplerMap& map, double velocity_mps, const OtfsParams& params);
/// Map row at the delay bin nearest to range_m, indexed by velocity.
std::vector<ProfilePoint> velocity_profile(const DelayDopplerMap& map, double range_m, const OtfsParams& params);

/// Vertex offset (in bins, clamped to [-0.5, 0.5]) of the parabola through
/// three equally spaced samples, fitted on natural-log values.
double parabolic_offset(double left, double centre, double right);

}  // namespace otfs
