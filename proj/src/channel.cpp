// SPDX-License-Identifier: Apache-2.0
#include "otfs/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace otfs {

void check_delays_within_prefix(const TargetSet& targets, const OtfsParams& params) {
  const double limit = params.cp_duration() * (1.0 + 1e-12);
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const double tau = targets.taps[k].delay_s;
    if (!std::isfinite(tau) || tau < 0.0 || tau > limit) {
      throw std::domain_error("target " + std::to_string(k) + ": delay " + std::to_string(tau) +
                              " s outside [0, Tcp = " + std::to_string(params.cp_duration()) + " s]");
    }
    if (!std::isfinite(targets.taps[k].doppler_hz)) {
      throw std::domain_error("target " + std::to_string(k) + ": non-finite Doppler");
    }
  }
}

RxSignal synthesize_rx(const DelayDopplerFrame& frame, const TargetSet& targets, const OtfsParams& params,
                       double sigma2, std::uint64_t seed) {
  check_delays_within_prefix(targets, params);
  const std::size_t len = params.frame_samples();
  const double ts = params.sample_period();

  RxSignal rx;
  rx.noise_seed = seed;
  rx.samples.assign(len, cplx{});
  for (const auto& tap : targets.taps) {
    const double delay_samples = tap.delay_s / ts;
    const double doppler_cycles = tap.doppler_hz * ts;  // per sample
    for (std::size_t l = 0; l < len; ++l) {
      const double u = static_cast<double>(l) - delay_samples;
      rx.samples[l] += tap.gain * evaluate_tx_samples(u, frame) * cis_cycles(doppler_cycles * static_cast<double>(l));
    }
  }
  add_noise(rx.samples, sigma2, seed);
  return rx;
}

void add_noise(std::span<cplx> y, double sigma2, std::uint64_t seed) {
  if (sigma2 < 0.0) throw std::invalid_argument("noise variance must be non-negative");
  if (sigma2 == 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
  for (auto& v : y) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v += cplx{re, im};
  }
}

cplx snr_to_gain(double snr_db, double sigma2, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double magnitude = std::sqrt(sigma2 * std::pow(10.0, snr_db / 10.0));
  return std::polar(magnitude, phase(rng));
}

}  // namespace otfs
