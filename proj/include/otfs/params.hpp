// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace otfs {

inline constexpr double kSpeedOfLight = 2.9979e8;

/// Raw numerology as read from a config file or written in code.
struct ParamsConfig {
  std::size_t n_subcarriers = 0;
  std::size_t n_symbols = 0;
  double subcarrier_spacing_hz = 0.0;
  double cp_duration_s = 0.0;
  double carrier_hz = 0.0;
  double noise_variance = 1.0;
  double propagation_speed_mps = kSpeedOfLight;
};

/// Validated OTFS numerology. The symbol duration is always 1/subcarrier_spacing.
class OtfsParams {
 public:
  explicit OtfsParams(const ParamsConfig& cfg);

  std::size_t n_subcarriers() const { return cfg_.n_subcarriers; }
  std::size_t n_symbols() const { return cfg_.n_symbols; }
  std::size_t frame_samples() const { return cfg_.n_subcarriers * cfg_.n_symbols; }

  double subcarrier_spacing() const { return cfg_.subcarrier_spacing_hz; }
  double symbol_duration() const { return 1.0 / cfg_.subcarrier_spacing_hz; }
  double sample_period() const { return symbol_duration() / static_cast<double>(cfg_.n_subcarriers); }
  double cp_duration() const { return cfg_.cp_duration_s; }
  double carrier_frequency() const { return cfg_.carrier_hz; }
  double propagation_speed() const { return cfg_.propagation_speed_mps; }
  double wavelength() const { return cfg_.propagation_speed_mps / cfg_.carrier_hz; }
  double noise_variance() const { return cfg_.noise_variance; }

  double bandwidth() const { return static_cast<double>(cfg_.n_subcarriers) * cfg_.subcarrier_spacing_hz; }
  /// M*T, the frame without the prefix.
  double frame_body_duration() const { return static_cast<double>(cfg_.n_symbols) * symbol_duration(); }
  double frame_duration() const { return frame_body_duration() + cfg_.cp_duration_s; }

  /// Natural delay / Doppler grid steps: T/N and 1/(MT).
  double delay_step() const { return sample_period(); }
  double doppler_step() const { return 1.0 / frame_body_duration(); }

  double delay_to_range(double tau) const;
  double range_to_delay(double range) const;
  double doppler_to_velocity(double nu) const;
  double velocity_to_doppler(double v) const;

  OtfsParams with_noise_variance(double sigma2) const;
  OtfsParams with_propagation_speed(double c) const;
  const ParamsConfig& config() const { return cfg_; }

 private:
  ParamsConfig cfg_;
};

struct ResolutionLimits {
  double range_resolution = 0.0;     // c / (2 N df)
  double velocity_resolution = 0.0;  // lambda / (2 M T)
  double tau_max = 0.0;              // min(1/df, Tcp)
  double tau_max_isi = 0.0;          // min(M/df, Tcp)
  double nu_max = 0.0;               // 1/T
  double nu_max_ici = 0.0;           // N/T
  double r_max = 0.0;
  double r_max_isi = 0.0;
  double v_max = 0.0;      // one-sided, interval is [-v_max, v_max)
  double v_max_ici = 0.0;  // one-sided
};

ResolutionLimits derive_limits(const OtfsParams& params);

// Free conversions; the member versions bind c and lambda from the params.
inline double delay_to_range(double tau, double c) { return c * tau / 2.0; }
inline double range_to_delay(double range, double c) { return 2.0 * range / c; }
inline double doppler_to_velocity(double nu, double wavelength) { return wavelength * nu / 2.0; }
inline double velocity_to_doppler(double v, double wavelength) { return 2.0 * v / wavelength; }

/// Built-in presets: "isi-regime" and "ici-regime".
OtfsParams preset_params(std::string_view name);
std::vector<std::string> preset_names();

/// Schema: {carrier_hz, subcarrier_spacing_hz | bandwidth_hz, n_subcarriers,
/// n_symbols, cp_duration_s, noise_variance, propagation_speed_mps?}.
OtfsParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const OtfsParams& params);

/// Accepts a preset name or a path to a JSON file. Throws std::runtime_error
/// with line/column information on malformed input.
OtfsParams load_params(const std::string& name_or_path);

/// Parses a JSON file, rethrowing parse errors as std::runtime_error naming the file.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace otfs
