// SPDX-License-Identifier: Apache-2.0
#include "otfs/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "otfs/experiments.hpp"
#include "otfs/fft_baseline.hpp"
#include "otfs/matrix_io.hpp"
#include "otfs/steering.hpp"

#ifndef OTFS_LAB_VERSION
#define OTFS_LAB_VERSION "dev"
#endif

namespace otfs::cli {
namespace {

struct Options {
  std::string params = "isi-regime";
  std::string scenario = "isi-a";
  std::string method = "glrt";
  std::string assoc;
  std::string axis = "range@velocity";
  std::string what = "frame";
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::vector<double> snr;
  std::optional<double> slice;
  std::optional<std::size_t> os_tau;
  std::optional<std::size_t> os_nu;
  std::optional<double> pfa;
  std::size_t cells = 1'000'000;
  double tau = 0.0;
  double nu = 0.0;
  bool noise_free = false;
};

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << v;
  return ss.str();
}

void apply_overrides(Scenario& s, const Options& o) {
  if (o.os_tau) s.grid.os_tau = *o.os_tau;
  if (o.os_nu) s.grid.os_nu = *o.os_nu;
  if (o.pfa) s.cfar.p_fa = *o.pfa;
  s.validate();
}

double db(double v) { return 10.0 * std::log10(std::max(v, 1e-300)); }

std::string cmd_limits(const Options& o) {
  const auto p = load_params(o.params);
  const auto lim = derive_limits(p);
  std::ostringstream ss;
  ss << std::setprecision(10);
  ss << "quantity,value,unit\n";
  ss << "carrier_frequency," << p.carrier_frequency() << ",Hz\n";
  ss << "subcarrier_spacing," << p.subcarrier_spacing() << ",Hz\n";
  ss << "n_subcarriers," << p.n_subcarriers() << ",\n";
  ss << "bandwidth," << p.bandwidth() << ",Hz\n";
  ss << "symbol_duration," << p.symbol_duration() << ",s\n";
  ss << "cp_duration," << p.cp_duration() << ",s\n";
  ss << "n_symbols," << p.n_symbols() << ",\n";
  ss << "frame_duration," << p.frame_duration() << ",s\n";
  ss << "range_resolution," << lim.range_resolution << ",m\n";
  ss << "max_range," << lim.r_max << ",m\n";
  ss << "max_range_isi," << lim.r_max_isi << ",m\n";
  ss << "velocity_resolution," << lim.velocity_resolution << ",m/s\n";
  ss << "max_velocity," << lim.v_max << ",m/s\n";
  ss << "max_velocity_ici," << lim.v_max_ici << ",m/s\n";
  return ss.str();
}

std::string cmd_profile(const Options& o) {
  auto scenario = load_scenario(o.scenario);
  apply_overrides(scenario, o);
  const auto method = parse_method(o.method);
  const auto& p = scenario.params;
  if (!o.slice) throw std::invalid_argument("--slice is required");

  const bool range_axis = o.axis == "range@velocity" || o.axis == "range";
  if (!range_axis && o.axis != "velocity@range" && o.axis != "velocity") {
    throw std::invalid_argument("--axis must be range@velocity or velocity@range");
  }
  TrialOptions topt;
  topt.noise_free = o.noise_free;
  topt.keep_map = true;
  const auto trial = run_trial(scenario, method, o.seed, topt);
  const auto& map = *trial.map;
  const auto& cfar = *trial.cfar;

  std::ostringstream ss;
  ss << std::setprecision(10);
  if (range_axis) {
    const auto col = map.doppler.nearest_bin(p.velocity_to_doppler(*o.slice));
    ss << "range_m,statistic_db,threshold_db\n";
    for (std::size_t i = 0; i < map.delay.size; ++i) {
      ss << p.delay_to_range(map.delay.value(i)) << ',' << db(map.values(i, col)) << ','
         << db(cfar.threshold(i, col)) << '\n';
    }
  } else {
    const auto row = map.delay.nearest_bin(p.range_to_delay(*o.slice));
    ss << "velocity_mps,statistic_db,threshold_db\n";
    for (std::size_t j = 0; j < map.doppler.size; ++j) {
      ss << p.doppler_to_velocity(map.doppler.value(j)) << ',' << db(map.values(row, j)) << ','
         << db(cfar.threshold(row, j)) << '\n';
    }
  }
  return ss.str();
}

struct McOutput {
  std::string csv;
  std::string provenance;
};

McOutput cmd_mc(const Options& o) {
  if (o.trials == 0) throw std::invalid_argument("--trials must be >= 1");
  auto scenario = load_scenario(o.scenario);
  apply_overrides(scenario, o);
  const auto method = parse_method(o.method);
  const auto mode = o.assoc.empty() ? default_mode(method) : parse_ambiguity_mode(o.assoc);
  std::vector<double> snr = o.snr;
  if (snr.empty()) snr.push_back(scenario.targets.at(scenario.reference_index).snr_db);

  const auto sweep = run_sweep(scenario, method, snr, o.trials, o.seed);
  std::ostringstream csv;
  write_metrics_csv(csv, sweep.table(mode));

  const auto scenario_json = scenario_to_json(scenario);
  nlohmann::json prov = {{"tool", "otfs_lab"},
                         {"version", OTFS_LAB_VERSION},
                         {"command", "mc"},
                         {"method", to_string(method)},
                         {"assoc", to_string(mode)},
                         {"root_seed", o.seed},
                         {"n_trials", o.trials},
                         {"snr_db", snr},
                         {"scenario", scenario_json},
                         {"config_hash", hex(fnv1a(scenario_json.dump()))}};
  return {csv.str(), prov.dump(2) + "\n"};
}

std::string cmd_calibrate(const Options& o) {
  const auto p = load_params(o.params);
  CfarConfig cfar;
  if (o.pfa) cfar.p_fa = *o.pfa;
  GridOptions grid;
  if (o.os_tau) grid.os_tau = *o.os_tau;
  if (o.os_nu) grid.os_nu = *o.os_nu;
  const auto cal = calibrate_cfar(p, cfar, parse_method(o.method), o.cells, o.seed, grid);
  std::ostringstream ss;
  ss << std::setprecision(10);
  ss << "p_fa,cells,false_alarms,rate,wilson_low,wilson_high,maps\n";
  ss << cal.p_fa << ',' << cal.cells << ',' << cal.false_alarms << ',' << cal.rate << ',' << cal.wilson_low << ','
     << cal.wilson_high << ',' << cal.maps << '\n';
  return ss.str();
}

std::string cmd_dump(const Options& o) {
  const auto p = load_params(o.params);
  CMatrix m;
  if (o.what == "frame") {
    m = generate_frame(p, o.seed).dd();
  } else if (o.what == "frame-ft") {
    m = generate_frame(p, o.seed).ft();
  } else {
    CVector v;
    if (o.what == "tx") {
      v = heisenberg_samples(generate_frame(p, o.seed)).samples;
    } else if (o.what == "steering-b") {
      v = steering_b(o.tau, p);
    } else if (o.what == "steering-c") {
      v = steering_c(o.nu, p);
    } else {
      throw std::invalid_argument("--what must be frame, frame-ft, tx, steering-b or steering-c");
    }
    m = CMatrix(v.size(), 1);
    m.set_column(0, v);
  }
  std::ostringstream ss;
  if (o.format == "csv") {
    io::write_csv(ss, m);
  } else if (o.format == "bin") {
    io::write_binary(ss, m);
  } else {
    throw std::invalid_argument("--format must be csv or bin");
  }
  return ss.str();
}

void emit(const std::string& payload, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << payload;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << payload;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"OTFS radar sensing lab: limits, profiles, Monte Carlo sweeps, CFAR calibration"};
  app.require_subcommand(1);
  Options o;

  auto add_method = [&](CLI::App* c) {
    c->add_option("--method", o.method, "Receiver: glrt or fft2d")->check(CLI::IsMember({"glrt", "fft2d"}));
  };
  auto add_grid = [&](CLI::App* c) {
    c->add_option("--os-tau", o.os_tau, "Delay oversampling of the GLRT grid")->check(CLI::PositiveNumber);
    c->add_option("--os-nu", o.os_nu, "Doppler oversampling of the GLRT grid")->check(CLI::PositiveNumber);
    c->add_option("--pfa", o.pfa, "CFAR design false-alarm probability per cell")->check(CLI::Range(0.0, 1.0));
  };

  auto* limits = app.add_subcommand("limits", "Resolution and ambiguity table for a parameter set");
  limits->add_option("--params", o.params, "Preset name or params JSON file");
  limits->add_option("--out", o.out, "Output file (default stdout)");

  auto* profile = app.add_subcommand("profile", "Range or velocity profile of one trial");
  profile->add_option("--scenario", o.scenario, "Scenario name or JSON file");
  add_method(profile);
  profile->add_option("--axis", o.axis, "range@velocity or velocity@range");
  profile->add_option("--slice", o.slice, "Velocity (m/s) or range (m) of the slice")->required();
  profile->add_option("--seed", o.seed, "Trial seed");
  profile->add_flag("--noise-free", o.noise_free, "Skip receiver noise");
  profile->add_option("--out", o.out, "Output CSV (default stdout)");
  add_grid(profile);

  auto* mc = app.add_subcommand("mc", "Monte Carlo SNR sweep of the reference target");
  mc->add_option("--scenario", o.scenario, "Scenario name or JSON file");
  add_method(mc);
  mc->add_option("--snr", o.snr, "Reference-target SNRs in dB, comma separated")->delimiter(',');
  mc->add_option("--trials", o.trials, "Trials per SNR point");
  mc->add_option("--seed", o.seed, "Root seed");
  mc->add_option("--assoc", o.assoc, "Association: folded or unambiguous")
      ->check(CLI::IsMember({"folded", "unambiguous"}));
  mc->add_option("--out", o.out, "Output directory for metrics.csv and provenance.json");
  add_grid(mc);

  auto* calibrate = app.add_subcommand("calibrate-cfar", "Empirical CFAR false-alarm rate on noise-only maps");
  calibrate->add_option("--params", o.params, "Preset name or params JSON file");
  add_method(calibrate);
  calibrate->add_option("--cells", o.cells, "Minimum number of cell decisions");
  calibrate->add_option("--seed", o.seed, "Root seed");
  calibrate->add_option("--out", o.out, "Output CSV (default stdout)");
  add_grid(calibrate);

  auto* dump = app.add_subcommand("dump", "Export frames, transmit samples or steering vectors");
  dump->add_option("--params", o.params, "Preset name or params JSON file");
  dump->add_option("--what", o.what, "frame, frame-ft, tx, steering-b or steering-c");
  dump->add_option("--tau", o.tau, "Delay for steering-b (s)");
  dump->add_option("--nu", o.nu, "Doppler for steering-c (Hz)");
  dump->add_option("--seed", o.seed, "Frame seed");
  dump->add_option("--format", o.format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));
  dump->add_option("--out", o.out, "Output file (default stdout)");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage_out;
    std::ostringstream usage_err;
    const int code = app.exit(e, usage_out, usage_err);
    out << usage_out.str();
    err << usage_err.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (*limits) {
      emit(cmd_limits(o), o.out, out);
    } else if (*profile) {
      emit(cmd_profile(o), o.out, out);
    } else if (*mc) {
      const auto res = cmd_mc(o);
      if (o.out.empty()) {
        out << res.csv;
        err << res.provenance;
      } else {
        std::filesystem::create_directories(o.out);
        emit(res.csv, (std::filesystem::path(o.out) / "metrics.csv").string(), out);
        emit(res.provenance, (std::filesystem::path(o.out) / "provenance.json").string(), out);
      }
    } else if (*calibrate) {
      emit(cmd_calibrate(o), o.out, out);
    } else if (*dump) {
      emit(cmd_dump(o), o.out, out);
    }
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace otfs::cli
