// SPDX-License-Identifier: Apache-2.0
#include "otfs/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace otfs {
namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string("invalid parameter '") + field + "': must be positive and finite");
  }
}

}  // namespace

OtfsParams::OtfsParams(const ParamsConfig& cfg) : cfg_(cfg) {
  if (cfg.n_subcarriers == 0) throw std::invalid_argument("invalid parameter 'n_subcarriers': must be positive");
  if (cfg.n_symbols == 0) throw std::invalid_argument("invalid parameter 'n_symbols': must be positive");
  require_positive(cfg.subcarrier_spacing_hz, "subcarrier_spacing_hz");
  require_positive(cfg.carrier_hz, "carrier_hz");
  require_positive(cfg.propagation_speed_mps, "propagation_speed_mps");
  if (!(cfg.cp_duration_s >= 0.0) || !std::isfinite(cfg.cp_duration_s)) {
    throw std::invalid_argument("invalid parameter 'cp_duration_s': must be non-negative and finite");
  }
  if (!(cfg.noise_variance >= 0.0) || !std::isfinite(cfg.noise_variance)) {
    throw std::invalid_argument("invalid parameter 'noise_variance': must be non-negative and finite");
  }
}

double OtfsParams::delay_to_range(double tau) const { return otfs::delay_to_range(tau, propagation_speed()); }
double OtfsParams::range_to_delay(double range) const { return otfs::range_to_delay(range, propagation_speed()); }
double OtfsParams::doppler_to_velocity(double nu) const { return otfs::doppler_to_velocity(nu, wavelength()); }
double OtfsParams::velocity_to_doppler(double v) const { return otfs::velocity_to_doppler(v, wavelength()); }

OtfsParams OtfsParams::with_noise_variance(double sigma2) const {
  auto cfg = cfg_;
  cfg.noise_variance = sigma2;
  return OtfsParams(cfg);
}

OtfsParams OtfsParams::with_propagation_speed(double c) const {
  auto cfg = cfg_;
  cfg.propagation_speed_mps = c;
  return OtfsParams(cfg);
}

ResolutionLimits derive_limits(const OtfsParams& p) {
  const double df = p.subcarrier_spacing();
  const double T = p.symbol_duration();
  const auto N = static_cast<double>(p.n_subcarriers());
  const auto M = static_cast<double>(p.n_symbols());

  ResolutionLimits lim;
  lim.tau_max_isi = std::min(M / df, p.cp_duration());
  lim.tau_max = std::min(1.0 / df, p.cp_duration());
  lim.nu_max_ici = N / T;
  lim.nu_max = 1.0 / T;
  lim.range_resolution = p.delay_to_range(1.0 / (N * df));
  lim.velocity_resolution = p.doppler_to_velocity(1.0 / (M * T));
  lim.r_max = p.delay_to_range(lim.tau_max);
  lim.r_max_isi = p.delay_to_range(lim.tau_max_isi);
  // Doppler intervals are two-sided and centred on zero.
  lim.v_max = p.doppler_to_velocity(lim.nu_max / 2.0);
  lim.v_max_ici = p.doppler_to_velocity(lim.nu_max_ici / 2.0);
  return lim;
}

OtfsParams preset_params(std::string_view name) {
  constexpr double kBandwidth = 50e6;
  if (name == "isi-regime") {
    return OtfsParams({.n_subcarriers = 64,
                       .n_symbols = 64,
                       .subcarrier_spacing_hz = kBandwidth / 64.0,
                       .cp_duration_s = 7.68e-6,
                       .carrier_hz = 60e9});
  }
  if (name == "ici-regime") {
    return OtfsParams({.n_subcarriers = 1024,
                       .n_symbols = 8,
                       .subcarrier_spacing_hz = kBandwidth / 1024.0,
                       .cp_duration_s = 20.48e-6,
                       .carrier_hz = 60e9});
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"isi-regime", "ici-regime"}; }

namespace {

template <typename T>
T required(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(std::string("field '") + key + "' has the wrong type");
  }
}

std::size_t required_count(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw std::invalid_argument(std::string("invalid parameter '") + key + "': must be a positive integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

OtfsParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("params must be a JSON object");
  ParamsConfig cfg;
  cfg.n_subcarriers = required_count(j, "n_subcarriers");
  cfg.n_symbols = required_count(j, "n_symbols");
  if (j.contains("subcarrier_spacing_hz")) {
    cfg.subcarrier_spacing_hz = required<double>(j, "subcarrier_spacing_hz");
  } else if (j.contains("bandwidth_hz")) {
    cfg.subcarrier_spacing_hz = required<double>(j, "bandwidth_hz") / static_cast<double>(cfg.n_subcarriers);
  } else {
    throw std::invalid_argument("missing field 'subcarrier_spacing_hz' (or 'bandwidth_hz')");
  }
  cfg.cp_duration_s = required<double>(j, "cp_duration_s");
  cfg.carrier_hz = required<double>(j, "carrier_hz");
  cfg.noise_variance = j.contains("noise_variance") ? required<double>(j, "noise_variance") : 1.0;
  if (j.contains("propagation_speed_mps")) cfg.propagation_speed_mps = required<double>(j, "propagation_speed_mps");
  return OtfsParams(cfg);
}

nlohmann::json params_to_json(const OtfsParams& p) {
  return {{"carrier_hz", p.carrier_frequency()},
          {"subcarrier_spacing_hz", p.subcarrier_spacing()},
          {"n_subcarriers", p.n_subcarriers()},
          {"n_symbols", p.n_symbols()},
          {"cp_duration_s", p.cp_duration()},
          {"noise_variance", p.noise_variance()},
          {"propagation_speed_mps", p.propagation_speed()}};
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports "line L, column C" in e.what().
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

OtfsParams load_params(const std::string& name_or_path) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return preset_params(name_or_path);
  const auto j = read_json_file(name_or_path);
  try {
    return params_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(name_or_path + ": " + e.what());
  }
}

}  // namespace otfs
