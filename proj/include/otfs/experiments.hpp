// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "otfs/cfar.hpp"
#include "otfs/channel.hpp"
#include "otfs/glrt.hpp"
#include "otfs/modem.hpp"

namespace otfs {

enum class Method { glrt, fft2d };
Method parse_method(std::string_view tag);
const char* to_string(Method method);
/// Folded for the FFT baseline, unambiguous for the GLRT.
AmbiguityMode default_mode(Method method);

enum class RmseAxis { range, velocity };

struct TargetSpec {
  double range_m = 0.0;
  double velocity_mps = 0.0;
  double snr_db = 0.0;
  std::optional<cplx> gain;  // fixed gain overrides snr_db
};

struct GridOptions {
  std::size_t os_tau = 1;
  std::size_t os_nu = 1;
  std::size_t refine_os_tau = 4;
  std::size_t refine_os_nu = 4;
};

struct Scenario {
  std::string name;
  std::string variant;
  std::string preset;  // empty when params came from an inline block
  OtfsParams params = preset_params("isi-regime");
  std::vector<TargetSpec> targets;
  std::size_t reference_index = 1;
  CfarConfig cfar;
  GridOptions grid;
  RmseAxis rmse_axis = RmseAxis::range;
  Constellation constellation = Constellation::qpsk;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// isi-a, isi-b, ici-a, ici-b and the target-free isi-h0.
std::vector<Scenario> builtin_scenarios();
Scenario builtin_scenario(std::string_view name);

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
/// Built-in name or path to a scenario JSON file.
Scenario load_scenario(const std::string& name_or_path);

/// splitmix64-style mixing of a root seed with a key path.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys);

/// Channel taps for one trial: delays/Dopplers from range/velocity, gains
/// from snr_db with a per-target random phase drawn from the seed.
TargetSet realize_targets(const Scenario& scenario, std::uint64_t seed);

struct TrialOptions {
  bool noise_free = false;  // gains still follow the scenario SNRs
  bool keep_map = false;
};

struct ReferenceEstimate {
  double range_m = 0.0;
  double velocity_mps = 0.0;
  double error = 0.0;  // along the scenario's RMSE axis, against (folded) truth
};

struct TrialResult {
  TargetSet targets;
  std::array<DetectionReport, 2> reports;  // indexed by AmbiguityMode
  std::array<std::optional<ReferenceEstimate>, 2> reference;
  std::optional<DelayDopplerMap> map;
  std::optional<CfarResult> cfar;

  const DetectionReport& report(AmbiguityMode mode) const { return reports[static_cast<std::size_t>(mode)]; }
  const std::optional<ReferenceEstimate>& reference_estimate(AmbiguityMode mode) const {
    return reference[static_cast<std::size_t>(mode)];
  }
};

/// Fresh frame, continuous-time channel synthesis, receiver map, CFAR,
/// peaks, association in both modes. Deterministic in the seed.
TrialResult run_trial(const Scenario& scenario, Method method, std::uint64_t seed, const TrialOptions& options = {});

struct MetricsRow {
  double snr_db = 0.0;
  double p_detect = 0.0;
  double mean_false_alarms = 0.0;
  std::optional<double> rmse;  // over trials where the reference target was matched
  std::size_t n_trials = 0;
};

struct SweepResult {
  Method method = Method::glrt;
  std::array<std::vector<MetricsRow>, 2> rows;  // indexed by AmbiguityMode
  const std::vector<MetricsRow>& table(AmbiguityMode mode) const { return rows[static_cast<std::size_t>(mode)]; }
};

/// Sweeps the reference target's SNR; other targets keep their scenario SNRs.
/// Trial t at grid point i uses derive_seed(root, {i, t}) for every method,
/// so methods see the same frames and noise and serial/parallel runs agree.
SweepResult run_sweep(const Scenario& scenario, Method method, std::span<const double> snr_grid_db,
                      std::size_t n_trials, std::uint64_t root_seed, std::size_t workers = 0);

struct CfarCalibration {
  double p_fa = 0.0;
  std::size_t cells = 0;
  std::size_t false_alarms = 0;
  std::size_t maps = 0;
  double rate = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
};

/// Runs CA-CFAR over noise-only receiver maps (fresh frame and noise per map)
/// until at least n_cells cell decisions have been made.
CfarCalibration calibrate_cfar(const OtfsParams& params, const CfarConfig& cfar, Method method,
                               std::size_t n_cells, std::uint64_t seed, const GridOptions& grid = {});

/// Header "snr_db,pd,mean_fa,rmse,n_trials"; a missing RMSE is an empty field.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

}  // namespace otfs
