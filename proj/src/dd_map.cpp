// SPDX-License-Identifier: Apache-2.0
#include "otfs/dd_map.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "otfs/matrix_io.hpp"

namespace otfs {

std::size_t MapAxis::nearest_bin(double x) const {
  if (size == 0) throw std::out_of_range("empty axis");
  double pos = (x - origin) / step;
  if (periodic) {
    const auto n = static_cast<double>(size);
    pos = std::fmod(std::nearbyint(pos), n);
    if (pos < 0.0) pos += n;
    return static_cast<std::size_t>(pos) % size;
  }
  if (pos < -0.5 || pos > static_cast<double>(size) - 0.5) {
    throw std::out_of_range("slice value " + std::to_string(x) + " outside the map axis");
  }
  return std::min(static_cast<std::size_t>(std::nearbyint(std::max(pos, 0.0))), size - 1);
}

void write_map_csv(std::ostream& out, const DelayDopplerMap& map) {
  out << "delay_bin,doppler_bin,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < map.values.rows(); ++i) {
    for (std::size_t j = 0; j < map.values.cols(); ++j) out << i << ',' << j << ',' << map.values(i, j) << '\n';
  }
}

void write_map_binary(std::ostream& out, const DelayDopplerMap& map) { io::write_binary(out, map.values); }

std::vector<ProfilePoint> range_profile(const DelayDopplerMap& map, double velocity_mps, const OtfsParams& params) {
  const std::size_t col = map.doppler.nearest_bin(params.velocity_to_doppler(velocity_mps));
  std::vector<ProfilePoint> out(map.delay.size);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {params.delay_to_range(map.delay.value(i)), map.values(i, col)};
  }
  return out;
}

std::vector<ProfilePoint> velocity_profile(const DelayDopplerMap& map, double range_m, const OtfsParams& params) {
  const std::size_t row = map.delay.nearest_bin(params.range_to_delay(range_m));
  std::vector<ProfilePoint> out(map.doppler.size);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = {params.doppler_to_velocity(map.doppler.value(j)), map.values(row, j)};
  }
  return out;
}

double parabolic_offset(double left, double centre, double right) {
  constexpr double kFloor = 1e-300;
  const double l = std::log(std::max(left, kFloor));
  const double c = std::log(std::max(centre, kFloor));
  const double r = std::log(std::max(right, kFloor));
  const double denom = l - 2.0 * c + r;
  if (!(denom < 0.0)) return 0.0;  // not a strict maximum
  return std::clamp(0.5 * (l - r) / denom, -0.5, 0.5);
}

}  // namespace otfs
