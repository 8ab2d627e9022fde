// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "otfs/channel.hpp"
#include "otfs/dd_map.hpp"

namespace otfs {

/// Half-widths along (delay, Doppler).
struct CfarWindow {
  std::size_t delay = 0;
  std::size_t doppler = 0;
};

enum class BoundaryPolicy {
  wrap_periodic,  // wrap along periodic axes, shrink the window at other edges
  shrink,         // shrink at every edge
};

struct CfarConfig {
  double p_fa = 1e-4;
  CfarWindow guard{2, 2};
  CfarWindow training{4, 4};
  BoundaryPolicy boundary = BoundaryPolicy::wrap_periodic;

  /// Throws std::invalid_argument unless 0 < p_fa < 1 and the training band is nonempty.
  void validate() const;
};

/// CA-CFAR scale for n_training exponential cells: n (p_fa^{-1/n} - 1).
double cfar_scale(std::size_t n_training, double p_fa);

struct CfarResult {
  Matrix<std::uint8_t> mask;  // 1 where value > threshold
  RMatrix threshold;
};

/// Cell-averaging CFAR. On a periodic axis that is too short for the window,
/// the half-width is reduced to fit (training cells first, keeping at least one).
CfarResult ca_cfar(const DelayDopplerMap& map, const CfarConfig& config);

struct Detection {
  std::size_t delay_bin = 0;
  std::size_t doppler_bin = 0;
  double delay_s = 0.0;
  double doppler_hz = 0.0;
  double value = 0.0;
  double threshold = 0.0;
  double refined_delay_s = 0.0;  // parabolic interpolation on log values
  double refined_doppler_hz = 0.0;
  std::optional<cplx> alpha;
};

/// Cells that pass CFAR and are strict maxima of their 3x3 neighbourhood,
/// sorted by decreasing value.
std::vector<Detection> extract_peaks(const CfarResult& cfar, const DelayDopplerMap& map);

enum class AmbiguityMode { unambiguous, folded };
AmbiguityMode parse_ambiguity_mode(std::string_view tag);
const char* to_string(AmbiguityMode mode);

struct DetectionReport {
  AmbiguityMode mode = AmbiguityMode::unambiguous;
  std::vector<Detection> detections;
  std::vector<std::optional<std::size_t>> matches;  // per target: index into detections
  std::size_t false_alarm_count = 0;

  std::size_t matched_count() const;
  nlohmann::json to_json(const OtfsParams& params) const;
};

/// Folds a range into [0, c/(2 df)) and a velocity into [-lambda/(4T), lambda/(4T)).
double fold_range(double range_m, const OtfsParams& params);
double fold_velocity(double velocity_mps, const OtfsParams& params);

/// Greedy association: detections in decreasing statistic order take the
/// nearest unmatched target within one range and one velocity resolution
/// cell. In folded mode the truth is first folded into the conventional
/// ambiguity intervals and distances wrap. Leftover detections are false alarms.
DetectionReport associate(const std::vector<Detection>& detections, const TargetSet& targets,
                          const OtfsParams& params, AmbiguityMode mode);

}  // namespace otfs
