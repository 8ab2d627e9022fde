// SPDX-License-Identifier: Apache-2.0
#include "otfs/cfar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace otfs {

void CfarConfig::validate() const {
  if (!(p_fa > 0.0 && p_fa < 1.0)) throw std::invalid_argument("cfar: p_fa must lie in (0, 1)");
  if (training.delay == 0 && training.doppler == 0) {
    throw std::invalid_argument("cfar: training band is empty");
  }
}

double cfar_scale(std::size_t n_training, double p_fa) {
  if (n_training == 0) throw std::invalid_argument("cfar: no training cells");
  const auto n = static_cast<double>(n_training);
  return n * std::expm1(-std::log(p_fa) / n);
}

namespace {

struct AxisWindow {
  long guard = 0;
  long outer = 0;  // guard + training
  bool wrap = false;
  long size = 0;

  // Number of axis cells inside [i - half, i + half].
  long count(long i, long half) const {
    if (wrap) return 2 * half + 1;
    return std::min(i + half, size - 1) - std::max(i - half, 0L) + 1;
  }
};

AxisWindow fit_axis(std::size_t size, std::size_t guard, std::size_t training, bool periodic, BoundaryPolicy policy) {
  AxisWindow w;
  w.size = static_cast<long>(size);
  w.guard = static_cast<long>(guard);
  w.outer = static_cast<long>(guard + training);
  w.wrap = periodic && policy == BoundaryPolicy::wrap_periodic;
  if (w.wrap && 2 * w.outer + 1 > w.size) {
    w.outer = (w.size - 1) / 2;
    if (training > 0) w.guard = std::min(w.guard, std::max(0L, w.outer - 1));
    w.guard = std::min(w.guard, w.outer);
  }
  return w;
}

// Sliding sums of `line` over [i - half, i + half].
void window_sums(std::span<const double> line, long half, bool wrap, std::span<double> out,
                 std::vector<double>& prefix) {
  const auto n = static_cast<long>(line.size());
  prefix.assign(line.size() + 1, 0.0);
  for (long i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + line[i];
  auto range_sum = [&](long lo, long hi) { return prefix[hi + 1] - prefix[lo]; };
  for (long i = 0; i < n; ++i) {
    long lo = i - half;
    long hi = i + half;
    double acc = 0.0;
    if (wrap) {
      if (lo < 0) {
        acc += range_sum(lo + n, n - 1);
        lo = 0;
      }
      if (hi >= n) {
        acc += range_sum(0, hi - n);
        hi = n - 1;
      }
    } else {
      lo = std::max(lo, 0L);
      hi = std::min(hi, n - 1);
    }
    out[i] = acc + range_sum(lo, hi);
  }
}

// 2-D box sums with per-axis half-widths.
RMatrix box_sums(const RMatrix& x, long half_rows, bool wrap_rows, long half_cols, bool wrap_cols) {
  const std::size_t rows = x.rows();
  const std::size_t cols = x.cols();
  RMatrix along(rows, cols);
  std::vector<double> prefix;
  for (std::size_t r = 0; r < rows; ++r) window_sums(x.row(r), half_cols, wrap_cols, along.row(r), prefix);

  RMatrix out(rows, cols);
  std::vector<double> line(rows);
  std::vector<double> sums(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) line[r] = along(r, c);
    window_sums(line, half_rows, wrap_rows, sums, prefix);
    for (std::size_t r = 0; r < rows; ++r) out(r, c) = sums[r];
  }
  return out;
}

}  // namespace

CfarResult ca_cfar(const DelayDopplerMap& map, const CfarConfig& config) {
  config.validate();
  const auto& v = map.values;
  const auto rows = v.rows();
  const auto cols = v.cols();
  const auto ax_d = fit_axis(rows, config.guard.delay, config.training.delay, map.delay.periodic, config.boundary);
  const auto ax_v = fit_axis(cols, config.guard.doppler, config.training.doppler, map.doppler.periodic,
                             config.boundary);

  RMatrix training = box_sums(v, ax_d.outer, ax_d.wrap, ax_v.outer, ax_v.wrap);
  const RMatrix inner = box_sums(v, ax_d.guard, ax_d.wrap, ax_v.guard, ax_v.wrap);

  CfarResult res;
  res.mask = Matrix<std::uint8_t>(rows, cols, 0);
  res.threshold = RMatrix(rows, cols);
  std::unordered_map<long, double> scale_cache;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto ii = static_cast<long>(i);
    const long od = ax_d.count(ii, ax_d.outer);
    const long gd = ax_d.count(ii, ax_d.guard);
    for (std::size_t j = 0; j < cols; ++j) {
      const auto jj = static_cast<long>(j);
      const long n_train = od * ax_v.count(jj, ax_v.outer) - gd * ax_v.count(jj, ax_v.guard);
      if (n_train <= 0) throw std::invalid_argument("cfar: no training cells at a map cell");
      auto it = scale_cache.find(n_train);
      if (it == scale_cache.end()) {
        it = scale_cache.emplace(n_train, cfar_scale(static_cast<std::size_t>(n_train), config.p_fa)).first;
      }
      const double train_sum = std::max(training(i, j) - inner(i, j), 0.0);
      const double thr = it->second * train_sum / static_cast<double>(n_train);
      res.threshold(i, j) = thr;
      res.mask(i, j) = v(i, j) > thr ? 1 : 0;
    }
  }
  return res;
}

namespace {

// Neighbour index along an axis, or -1 when it falls off a non-periodic edge.
long neighbour(long i, long delta, long size, bool periodic) {
  long k = i + delta;
  if (k >= 0 && k < size) return k;
  if (!periodic) return -1;
  return ((k % size) + size) % size;
}

}  // namespace

std::vector<Detection> extract_peaks(const CfarResult& cfar, const DelayDopplerMap& map) {
  const auto& v = map.values;
  if (cfar.mask.rows() != v.rows() || cfar.mask.cols() != v.cols()) {
    throw std::invalid_argument("extract_peaks: mask and map differ in shape");
  }
  const auto rows = static_cast<long>(v.rows());
  const auto cols = static_cast<long>(v.cols());
  std::vector<Detection> out;
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      if (!cfar.mask(i, j)) continue;
      const double centre = v(i, j);
      bool is_peak = true;
      for (long di = -1; di <= 1 && is_peak; ++di) {
        const long ni = neighbour(i, di, rows, map.delay.periodic);
        if (ni < 0) continue;
        for (long dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const long nj = neighbour(j, dj, cols, map.doppler.periodic);
          if (nj < 0 || (ni == i && nj == j)) continue;
          if (v(ni, nj) >= centre) {
            is_peak = false;
            break;
          }
        }
      }
      if (!is_peak) continue;

      Detection d;
      d.delay_bin = static_cast<std::size_t>(i);
      d.doppler_bin = static_cast<std::size_t>(j);
      d.delay_s = map.delay.value(d.delay_bin);
      d.doppler_hz = map.doppler.value(d.doppler_bin);
      d.value = centre;
      d.threshold = cfar.threshold(i, j);

      double off_d = 0.0;
      const long up = neighbour(i, -1, rows, map.delay.periodic);
      const long dn = neighbour(i, 1, rows, map.delay.periodic);
      if (up >= 0 && dn >= 0 && up != dn) off_d = parabolic_offset(v(up, j), centre, v(dn, j));
      double off_v = 0.0;
      const long lf = neighbour(j, -1, cols, map.doppler.periodic);
      const long rt = neighbour(j, 1, cols, map.doppler.periodic);
      if (lf >= 0 && rt >= 0 && lf != rt) off_v = parabolic_offset(v(i, lf), centre, v(i, rt));
      d.refined_delay_s = d.delay_s + off_d * map.delay.step;
      d.refined_doppler_hz = d.doppler_hz + off_v * map.doppler.step;
      if (!map.alpha.empty()) d.alpha = map.alpha(i, j);
      out.push_back(d);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) { return a.value > b.value; });
  return out;
}

AmbiguityMode parse_ambiguity_mode(std::string_view tag) {
  if (tag == "unambiguous") return AmbiguityMode::unambiguous;
  if (tag == "folded") return AmbiguityMode::folded;
  throw std::invalid_argument("unknown association mode '" + std::string(tag) + "'");
}

const char* to_string(AmbiguityMode mode) {
  return mode == AmbiguityMode::folded ? "folded" : "unambiguous";
}

std::size_t DetectionReport::matched_count() const {
  return static_cast<std::size_t>(std::count_if(matches.begin(), matches.end(), [](const auto& m) { return m.has_value(); }));
}

nlohmann::json DetectionReport::to_json(const OtfsParams& params) const {
  nlohmann::json dets = nlohmann::json::array();
  for (const auto& d : detections) {
    nlohmann::json j = {{"delay_bin", d.delay_bin},
                        {"doppler_bin", d.doppler_bin},
                        {"delay_s", d.delay_s},
                        {"doppler_hz", d.doppler_hz},
                        {"range_m", params.delay_to_range(d.delay_s)},
                        {"velocity_mps", params.doppler_to_velocity(d.doppler_hz)},
                        {"value", d.value},
                        {"threshold", d.threshold}};
    if (d.alpha) j["alpha"] = {d.alpha->real(), d.alpha->imag()};
    dets.push_back(std::move(j));
  }
  nlohmann::json m = nlohmann::json::array();
  for (const auto& match : matches) m.push_back(match ? nlohmann::json(*match) : nlohmann::json(nullptr));
  return {{"mode", to_string(mode)},
          {"detections", std::move(dets)},
          {"matches", std::move(m)},
          {"false_alarm_count", false_alarm_count}};
}

namespace {

double wrap_into(double x, double lo, double period) {
  double r = std::fmod(x - lo, period);
  if (r < 0.0) r += period;
  return lo + r;
}

double circular_distance(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

}  // namespace

double fold_range(double range_m, const OtfsParams& params) {
  return wrap_into(range_m, 0.0, params.delay_to_range(params.symbol_duration()));
}

double fold_velocity(double velocity_mps, const OtfsParams& params) {
  const double span = params.doppler_to_velocity(1.0 / params.symbol_duration());
  return wrap_into(velocity_mps, -span / 2.0, span);
}

DetectionReport associate(const std::vector<Detection>& detections, const TargetSet& targets,
                          const OtfsParams& params, AmbiguityMode mode) {
  const auto lim = derive_limits(params);
  const double gate_r = lim.range_resolution * (1.0 + 1e-9);
  const double gate_v = lim.velocity_resolution * (1.0 + 1e-9);
  const double range_period = params.delay_to_range(params.symbol_duration());
  const double velocity_period = params.doppler_to_velocity(1.0 / params.symbol_duration());

  std::vector<double> truth_r(targets.size());
  std::vector<double> truth_v(targets.size());
  for (std::size_t k = 0; k < targets.size(); ++k) {
    truth_r[k] = targets.range_m(k, params);
    truth_v[k] = targets.velocity_mps(k, params);
    if (mode == AmbiguityMode::folded) {
      truth_r[k] = fold_range(truth_r[k], params);
      truth_v[k] = fold_velocity(truth_v[k], params);
    }
  }

  DetectionReport report;
  report.mode = mode;
  report.detections = detections;
  report.matches.assign(targets.size(), std::nullopt);

  std::vector<std::size_t> order(detections.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return detections[a].value > detections[b].value; });

  for (const auto idx : order) {
    const auto& d = detections[idx];
    const double r = params.delay_to_range(d.delay_s);
    const double v = params.doppler_to_velocity(d.doppler_hz);
    std::optional<std::size_t> best;
    double best_dist = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
      if (report.matches[k]) continue;
      const double dr = mode == AmbiguityMode::folded ? circular_distance(r, truth_r[k], range_period)
                                                      : std::abs(r - truth_r[k]);
      const double dv = mode == AmbiguityMode::folded ? circular_distance(v, truth_v[k], velocity_period)
                                                      : std::abs(v - truth_v[k]);
      if (dr > gate_r || dv > gate_v) continue;
      const double dist = (dr / gate_r) * (dr / gate_r) + (dv / gate_v) * (dv / gate_v);
      if (!best || dist < best_dist) {
        best = k;
        best_dist = dist;
      }
    }
    if (best) {
      report.matches[*best] = idx;
    } else {
      ++report.false_alarm_count;
    }
  }
  return report;
}

}  // namespace otfs
