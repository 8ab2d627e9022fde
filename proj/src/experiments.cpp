// SPDX-License-Identifier: Apache-2.0
#include "otfs/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "otfs/fft_baseline.hpp"
#include "otfs/parallel.hpp"
#include "otfs/stats.hpp"

namespace otfs {

Method parse_method(std::string_view tag) {
  if (tag == "glrt") return Method::glrt;
  if (tag == "fft2d" || tag == "fft") return Method::fft2d;
  throw std::invalid_argument("unknown method '" + std::string(tag) + "'");
}

const char* to_string(Method method) { return method == Method::glrt ? "glrt" : "fft2d"; }

AmbiguityMode default_mode(Method method) {
  return method == Method::fft2d ? AmbiguityMode::folded : AmbiguityMode::unambiguous;
}

void Scenario::validate() const {
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const double tau = params.range_to_delay(targets[k].range_m);
    if (!(tau >= 0.0) || tau > params.cp_duration() * (1.0 + 1e-12)) {
      throw std::invalid_argument("targets[" + std::to_string(k) + "].range_m: delay exceeds the cyclic prefix");
    }
  }
  if (!targets.empty() && reference_index >= targets.size()) {
    throw std::invalid_argument("reference_index: out of range");
  }
  if (grid.os_tau == 0 || grid.os_nu == 0 || grid.refine_os_tau == 0 || grid.refine_os_nu == 0) {
    throw std::invalid_argument("grid: oversampling factors must be >= 1");
  }
  cfar.validate();
}

namespace {

Scenario make_scenario(std::string name, std::string variant, std::string preset, std::vector<double> ranges,
                       std::vector<double> velocities, RmseAxis axis) {
  static const std::vector<double> kSnrs = {25.0, 10.0, 20.0, 10.0};
  Scenario s;
  s.name = std::move(name);
  s.variant = std::move(variant);
  s.params = preset_params(preset);
  s.preset = std::move(preset);
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    s.targets.push_back({.range_m = ranges[k], .velocity_mps = velocities[k], .snr_db = kSnrs[k], .gain = std::nullopt});
  }
  s.reference_index = 1;
  s.rmse_axis = axis;
  return s;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  // Targets 3/4 sit one conventional range ambiguity (c/(2 df) ~ 192 m) beyond targets 1/2.
  out.push_back(make_scenario("isi-a", "A", "isi-regime", {50, 120, 242, 312}, {20, 20, 20, 20}, RmseAxis::range));
  out.push_back(make_scenario("isi-b", "B", "isi-regime", {50, 120, 272, 282}, {20, 20, 20, 20}, RmseAxis::range));
  // Targets 3/4 sit one conventional velocity ambiguity (~122 m/s) beyond targets 1/2. All pairs are
  // >= 7.5 Doppler cells apart so no target falls inside another's CFAR training band.
  out.push_back(
      make_scenario("ici-a", "A", "ici-regime", {120, 120, 120, 120}, {58, -58, 180, -180}, RmseAxis::velocity));
  out.push_back(
      make_scenario("ici-b", "B", "ici-regime", {120, 120, 120, 120}, {58, -58, 190, -170}, RmseAxis::velocity));
  out.push_back(make_scenario("isi-h0", "H0", "isi-regime", {}, {}, RmseAxis::range));
  return out;
}

Scenario builtin_scenario(std::string_view name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

namespace {

CfarWindow window_from_json(const nlohmann::json& j, const char* field) {
  if (j.is_array() && j.size() == 2) return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
  if (j.is_number_unsigned()) return {j.get<std::size_t>(), j.get<std::size_t>()};
  throw std::invalid_argument(std::string("cfar.") + field + ": expected [delay, doppler] or a single count");
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario must be a JSON object");
  Scenario s;
  s.name = j.value("name", std::string("custom"));
  s.variant = j.value("variant", std::string());
  if (j.contains("params")) {
    s.params = params_from_json(j.at("params"));
  } else if (j.contains("preset")) {
    s.preset = j.at("preset").get<std::string>();
    s.params = preset_params(s.preset);
  } else {
    throw std::invalid_argument("missing field 'preset' (or inline 'params')");
  }
  if (j.contains("noise_variance")) s.params = s.params.with_noise_variance(j.at("noise_variance").get<double>());

  const auto& targets = j.contains("targets") ? j.at("targets") : nlohmann::json::array();
  if (!targets.is_array()) throw std::invalid_argument("field 'targets' must be an array");
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto& t = targets[k];
    const std::string where = "targets[" + std::to_string(k) + "]";
    TargetSpec spec;
    if (t.contains("range_m")) {
      spec.range_m = t.at("range_m").get<double>();
    } else if (t.contains("delay_s")) {
      spec.range_m = s.params.delay_to_range(t.at("delay_s").get<double>());
    } else {
      throw std::invalid_argument(where + ": missing 'range_m' or 'delay_s'");
    }
    if (t.contains("velocity_mps")) {
      spec.velocity_mps = t.at("velocity_mps").get<double>();
    } else if (t.contains("doppler_hz")) {
      spec.velocity_mps = s.params.doppler_to_velocity(t.at("doppler_hz").get<double>());
    } else {
      throw std::invalid_argument(where + ": missing 'velocity_mps' or 'doppler_hz'");
    }
    if (t.contains("gain_complex")) {
      const auto& g = t.at("gain_complex");
      if (!g.is_array() || g.size() != 2) throw std::invalid_argument(where + ".gain_complex: expected [re, im]");
      spec.gain = cplx{g[0].get<double>(), g[1].get<double>()};
      spec.snr_db = 10.0 * std::log10(std::norm(*spec.gain) / s.params.noise_variance());
    } else if (t.contains("snr_db")) {
      spec.snr_db = t.at("snr_db").get<double>();
    } else {
      throw std::invalid_argument(where + ": missing 'snr_db' or 'gain_complex'");
    }
    s.targets.push_back(spec);
  }
  s.reference_index = j.value("reference_index", s.targets.size() > 1 ? std::size_t{1} : std::size_t{0});

  if (j.contains("cfar")) {
    const auto& c = j.at("cfar");
    if (c.contains("p_fa")) s.cfar.p_fa = c.at("p_fa").get<double>();
    if (c.contains("guard")) s.cfar.guard = window_from_json(c.at("guard"), "guard");
    if (c.contains("training")) s.cfar.training = window_from_json(c.at("training"), "training");
    if (c.contains("boundary")) {
      const auto b = c.at("boundary").get<std::string>();
      if (b == "wrap_periodic") {
        s.cfar.boundary = BoundaryPolicy::wrap_periodic;
      } else if (b == "shrink") {
        s.cfar.boundary = BoundaryPolicy::shrink;
      } else {
        throw std::invalid_argument("cfar.boundary: expected 'wrap_periodic' or 'shrink'");
      }
    }
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    s.grid.os_tau = g.value("os_tau", s.grid.os_tau);
    s.grid.os_nu = g.value("os_nu", s.grid.os_nu);
    s.grid.refine_os_tau = g.value("refine_os_tau", s.grid.refine_os_tau);
    s.grid.refine_os_nu = g.value("refine_os_nu", s.grid.refine_os_nu);
  }
  if (j.contains("rmse_axis")) {
    const auto a = j.at("rmse_axis").get<std::string>();
    if (a == "range") {
      s.rmse_axis = RmseAxis::range;
    } else if (a == "velocity") {
      s.rmse_axis = RmseAxis::velocity;
    } else {
      throw std::invalid_argument("rmse_axis: expected 'range' or 'velocity'");
    }
  }
  if (j.contains("constellation")) s.constellation = parse_constellation(j.at("constellation").get<std::string>());
  s.validate();
  return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["variant"] = s.variant;
  if (!s.preset.empty()) {
    j["preset"] = s.preset;
    j["noise_variance"] = s.params.noise_variance();
  } else {
    j["params"] = params_to_json(s.params);
  }
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& t : s.targets) {
    nlohmann::json tj = {{"range_m", t.range_m}, {"velocity_mps", t.velocity_mps}};
    if (t.gain) {
      tj["gain_complex"] = {t.gain->real(), t.gain->imag()};
    } else {
      tj["snr_db"] = t.snr_db;
    }
    targets.push_back(std::move(tj));
  }
  j["targets"] = std::move(targets);
  j["reference_index"] = s.reference_index;
  j["cfar"] = {{"p_fa", s.cfar.p_fa},
               {"guard", {s.cfar.guard.delay, s.cfar.guard.doppler}},
               {"training", {s.cfar.training.delay, s.cfar.training.doppler}},
               {"boundary", s.cfar.boundary == BoundaryPolicy::shrink ? "shrink" : "wrap_periodic"}};
  j["grid"] = {{"os_tau", s.grid.os_tau},
               {"os_nu", s.grid.os_nu},
               {"refine_os_tau", s.grid.refine_os_tau},
               {"refine_os_nu", s.grid.refine_os_nu}};
  j["rmse_axis"] = s.rmse_axis == RmseAxis::range ? "range" : "velocity";
  j["constellation"] = s.constellation == Constellation::qpsk ? "qpsk" : "16qam";
  return j;
}

Scenario load_scenario(const std::string& name_or_path) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name_or_path) return s;
  }
  const auto j = read_json_file(name_or_path);
  try {
    return scenario_from_json(j);
  } catch (const std::exception& e) {
    throw std::runtime_error(name_or_path + ": " + e.what());
  }
}

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(root);
  for (const auto k : keys) h = mix(h ^ mix(k));
  return h;
}

TargetSet realize_targets(const Scenario& scenario, std::uint64_t seed) {
  TargetSet set;
  const double sigma2 = scenario.params.noise_variance() > 0.0 ? scenario.params.noise_variance() : 1.0;
  for (std::size_t k = 0; k < scenario.targets.size(); ++k) {
    const auto& spec = scenario.targets[k];
    Target t;
    t.delay_s = scenario.params.range_to_delay(spec.range_m);
    t.doppler_hz = scenario.params.velocity_to_doppler(spec.velocity_mps);
    t.gain = spec.gain ? *spec.gain : snr_to_gain(spec.snr_db, sigma2, derive_seed(seed, {0x6a1f, k}));
    set.taps.push_back(t);
  }
  return set;
}

namespace {

double axis_error(const Scenario& s, double range_est, double velocity_est, std::size_t k, AmbiguityMode mode) {
  const auto& p = s.params;
  const auto& spec = s.targets[k];
  if (s.rmse_axis == RmseAxis::range) {
    if (mode == AmbiguityMode::unambiguous) return range_est - spec.range_m;
    const double period = p.delay_to_range(p.symbol_duration());
    return std::remainder(range_est - fold_range(spec.range_m, p), period);
  }
  if (mode == AmbiguityMode::unambiguous) return velocity_est - spec.velocity_mps;
  const double period = p.doppler_to_velocity(1.0 / p.symbol_duration());
  return std::remainder(velocity_est - fold_velocity(spec.velocity_mps, p), period);
}

}  // namespace

TrialResult run_trial(const Scenario& scenario, Method method, std::uint64_t seed, const TrialOptions& options) {
  scenario.validate();
  const auto& p = scenario.params;
  const double sigma2 = p.noise_variance();
  const double detector_sigma2 = sigma2 > 0.0 ? sigma2 : 1.0;

  const auto frame = generate_frame(p, derive_seed(seed, {1}), scenario.constellation);
  const auto tx = heisenberg_samples(frame);
  TrialResult result;
  result.targets = realize_targets(scenario, derive_seed(seed, {2}));
  const auto rx = synthesize_rx(frame, result.targets, p, options.noise_free ? 0.0 : sigma2, derive_seed(seed, {3}));

  std::optional<GlrtEvaluator> evaluator;
  DelayDopplerMap map;
  if (method == Method::glrt) {
    evaluator.emplace(rx.samples, tx.samples, detector_sigma2, p);
    map = evaluator->map(DetectionGrid::make(p, scenario.grid.os_tau, scenario.grid.os_nu));
  } else {
    map = ofdm_2dfft(rx.samples, frame, p, detector_sigma2);
  }
  auto cfar = ca_cfar(map, scenario.cfar);
  const auto detections = extract_peaks(cfar, map);

  for (const auto mode : {AmbiguityMode::unambiguous, AmbiguityMode::folded}) {
    const auto idx = static_cast<std::size_t>(mode);
    result.reports[idx] = associate(detections, result.targets, p, mode);
    const auto k = scenario.reference_index;
    if (k >= scenario.targets.size() || !result.reports[idx].matches[k]) continue;
    const auto& d = detections[*result.reports[idx].matches[k]];
    double tau = d.refined_delay_s;
    double nu = d.refined_doppler_hz;
    if (evaluator) {
      const auto peak = refine_peak(*evaluator, d.delay_s, d.doppler_hz, map.delay.step, map.doppler.step,
                                    scenario.grid.refine_os_tau, scenario.grid.refine_os_nu);
      tau = peak.delay_s;
      nu = peak.doppler_hz;
    }
    ReferenceEstimate est;
    est.range_m = p.delay_to_range(tau);
    est.velocity_mps = p.doppler_to_velocity(nu);
    est.error = axis_error(scenario, est.range_m, est.velocity_mps, k, mode);
    result.reference[idx] = est;
  }
  if (options.keep_map) {
    result.map = std::move(map);
    result.cfar = std::move(cfar);
  }
  return result;
}

SweepResult run_sweep(const Scenario& scenario, Method method, std::span<const double> snr_grid_db,
                      std::size_t n_trials, std::uint64_t root_seed, std::size_t workers) {
  if (n_trials == 0) throw std::invalid_argument("n_trials must be >= 1");
  if (scenario.targets.empty()) throw std::invalid_argument("sweep needs a reference target");
  scenario.validate();

  struct Outcome {
    std::array<bool, 2> detected{};
    std::array<std::size_t, 2> false_alarms{};
    std::array<double, 2> error{};
  };
  const std::size_t jobs = snr_grid_db.size() * n_trials;
  std::vector<Outcome> outcomes(jobs);

  std::vector<Scenario> per_point;
  per_point.reserve(snr_grid_db.size());
  for (const double snr : snr_grid_db) {
    auto s = scenario;
    s.targets[s.reference_index].snr_db = snr;
    s.targets[s.reference_index].gain.reset();
    per_point.push_back(std::move(s));
  }

  parallel_for(
      jobs,
      [&](std::size_t job) {
        const std::size_t point = job / n_trials;
        const std::size_t trial = job % n_trials;
        const auto res = run_trial(per_point[point], method, derive_seed(root_seed, {point, trial}));
        auto& out = outcomes[job];
        for (std::size_t m = 0; m < 2; ++m) {
          out.false_alarms[m] = res.reports[m].false_alarm_count;
          out.detected[m] = res.reference[m].has_value();
          if (out.detected[m]) out.error[m] = res.reference[m]->error;
        }
      },
      workers);

  SweepResult sweep;
  sweep.method = method;
  for (std::size_t m = 0; m < 2; ++m) {
    for (std::size_t point = 0; point < snr_grid_db.size(); ++point) {
      MetricsRow row;
      row.snr_db = snr_grid_db[point];
      row.n_trials = n_trials;
      std::size_t hits = 0;
      std::size_t fa = 0;
      double sq = 0.0;
      for (std::size_t t = 0; t < n_trials; ++t) {
        const auto& o = outcomes[point * n_trials + t];
        fa += o.false_alarms[m];
        if (o.detected[m]) {
          ++hits;
          sq += o.error[m] * o.error[m];
        }
      }
      row.p_detect = static_cast<double>(hits) / static_cast<double>(n_trials);
      row.mean_false_alarms = static_cast<double>(fa) / static_cast<double>(n_trials);
      if (hits > 0) row.rmse = std::sqrt(sq / static_cast<double>(hits));
      sweep.rows[m].push_back(row);
    }
  }
  return sweep;
}

CfarCalibration calibrate_cfar(const OtfsParams& params, const CfarConfig& cfar, Method method,
                               std::size_t n_cells, std::uint64_t seed, const GridOptions& grid) {
  cfar.validate();
  if (n_cells == 0) throw std::invalid_argument("calibrate_cfar: n_cells must be >= 1");
  const double sigma2 = params.noise_variance() > 0.0 ? params.noise_variance() : 1.0;

  CfarCalibration cal;
  cal.p_fa = cfar.p_fa;
  while (cal.cells < n_cells) {
    const auto map_seed = derive_seed(seed, {cal.maps});
    const auto frame = generate_frame(params, derive_seed(map_seed, {1}));
    CVector y(params.frame_samples(), cplx{});
    add_noise(y, sigma2, derive_seed(map_seed, {3}));
    DelayDopplerMap map;
    if (method == Method::glrt) {
      const auto tx = heisenberg_samples(frame);
      map = GlrtEvaluator(y, tx.samples, sigma2, params).map(DetectionGrid::make(params, grid.os_tau, grid.os_nu));
    } else {
      map = ofdm_2dfft(y, frame, params, sigma2);
    }
    const auto res = ca_cfar(map, cfar);
    for (const auto m : res.mask.flat()) cal.false_alarms += m;
    cal.cells += res.mask.size();
    ++cal.maps;
  }
  cal.rate = static_cast<double>(cal.false_alarms) / static_cast<double>(cal.cells);
  std::tie(cal.wilson_low, cal.wilson_high) = stats::wilson_interval(cal.false_alarms, cal.cells);
  return cal;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "snr_db,pd,mean_fa,rmse,n_trials\n" << std::setprecision(10);
  for (const auto& r : rows) {
    out << r.snr_db << ',' << r.p_detect << ',' << r.mean_false_alarms << ',';
    if (r.rmse) out << *r.rmse;
    out << ',' << r.n_trials << '\n';
  }
}

}  // namespace otfs
