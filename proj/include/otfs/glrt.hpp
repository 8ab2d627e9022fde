// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include "otfs/dd_map.hpp"
#include "otfs/params.hpp"

namespace otfs {

/// Search grid for the GLRT map.
///
/// Delay bins are (T/N)/os_tau wide and cover [0, tau_search_max]; Doppler
/// bins are 1/(MT)/os_nu wide and cover [-nu_search/2, nu_search/2).
/// tau_search_max defaults to Tcp, nu_search to the full N/T period.
struct DetectionGrid {
  std::size_t os_tau = 1;
  std::size_t os_nu = 1;
  MapAxis delay;
  MapAxis doppler;

  /// Throws std::invalid_argument if the region exceeds min(M/df, Tcp) in
  /// delay or N/T in Doppler, or an oversampling factor is zero.
  static DetectionGrid make(const OtfsParams& params, std::size_t os_tau = 1, std::size_t os_nu = 1,
                            std::optional<double> tau_search_max = std::nullopt,
                            std::optional<double> nu_search = std::nullopt);
};

enum class MapStrategy {
  automatic,      // whichever of the two below needs fewer transforms
  doppler_major,  // one Doppler de-rotation + correlation IFFT per Doppler bin
  delay_major,    // one echo template + Doppler FFT per delay bin
};

/// Evaluates the GLRT statistic
///   L(tau, nu) = |s^H F^H B^H(tau) F C^H(nu) y|^2 / (sigma2 ||s||^2)
/// for a fixed observation y and transmit signal s.
class GlrtEvaluator {
 public:
  /// Throws std::invalid_argument on length mismatch, sigma2 <= 0 or s == 0.
  GlrtEvaluator(std::span<const cplx> y, std::span<const cplx> s, double sigma2, const OtfsParams& params);

  /// s^H F^H B^H(tau) F C^H(nu) y, computed as <F s . b(tau), F (c*(nu) . y)>.
  cplx correlate(double tau, double nu) const;
  /// F (c*(nu) . y): the Doppler-compensated observation spectrum.
  CVector doppler_spectrum(double nu) const;
  /// Correlation against a precomputed doppler_spectrum() at delay tau.
  cplx correlate_spectrum(std::span<const cplx> z, double tau) const;
  double statistic(double tau, double nu) const;
  /// Least-squares gain for a target at (tau, nu).
  cplx alpha(double tau, double nu) const;

  StatisticMap map(const DetectionGrid& grid, MapStrategy strategy = MapStrategy::automatic,
                   bool keep_alpha = false) const;

  const OtfsParams& params() const { return params_; }
  double tx_energy() const { return tx_energy_; }
  double noise_variance() const { return sigma2_; }

 private:
  void fill_doppler_major(const DetectionGrid& grid, StatisticMap& out, bool keep_alpha) const;
  void fill_delay_major(const DetectionGrid& grid, StatisticMap& out, bool keep_alpha) const;

  OtfsParams params_;
  CVector y_;
  CVector s_;
  CVector tx_spectrum_;  // unitary DFT of s
  double sigma2_;
  double tx_energy_;
};

double glrt_statistic(std::span<const cplx> y, std::span<const cplx> s, double sigma2, double tau, double nu,
                      const OtfsParams& params);
cplx estimate_alpha(std::span<const cplx> y, std::span<const cplx> s, double tau, double nu,
                    const OtfsParams& params);
StatisticMap glrt_map(std::span<const cplx> y, std::span<const cplx> s, double sigma2, const DetectionGrid& grid,
                      const OtfsParams& params, MapStrategy strategy = MapStrategy::automatic);

struct RefinedPeak {
  double delay_s = 0.0;
  double doppler_hz = 0.0;
  double value = 0.0;
};

/// Re-evaluates the statistic on a local grid os_tau/os_nu times finer than
/// the coarse bins, spanning one coarse bin either side of (tau, nu), then
/// applies parabolic interpolation around the best fine cell.
RefinedPeak refine_peak(const GlrtEvaluator& evaluator, double tau, double nu, double coarse_delay_step,
                        double coarse_doppler_step, std::size_t os_tau, std::size_t os_nu);

}  // namespace otfs
