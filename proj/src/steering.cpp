// SPDX-License-Identifier: Apache-2.0
#include "otfs/steering.hpp"

#include <stdexcept>

#include "otfs/fft.hpp"

namespace otfs {
namespace {

// [exp(j 2 pi k step_cycles)] for k = 0..len-1
CVector phase_ramp(std::size_t len, double step_cycles) {
  CVector v(len);
  for (std::size_t k = 0; k < len; ++k) v[k] = cis_cycles(step_cycles * static_cast<double>(k));
  return v;
}

}  // namespace

CVector steering_b(double tau, const OtfsParams& p) {
  const double df = p.subcarrier_spacing();
  return phase_ramp(p.frame_samples(), -df * tau / static_cast<double>(p.n_symbols()));
}

CVector steering_c(double nu, const OtfsParams& p) { return phase_ramp(p.frame_samples(), nu * p.sample_period()); }

CVector steering_b_fast(double tau, const OtfsParams& p) {
  return phase_ramp(p.n_subcarriers(), -p.subcarrier_spacing() * tau);
}

CVector steering_b_slow(double tau, const OtfsParams& p) {
  return phase_ramp(p.n_symbols(), -p.subcarrier_spacing() * tau / static_cast<double>(p.n_symbols()));
}

CVector steering_c_slow(double nu, const OtfsParams& p) { return phase_ramp(p.n_symbols(), nu * p.symbol_duration()); }

CVector steering_c_fast(double nu, const OtfsParams& p) { return phase_ramp(p.n_subcarriers(), nu * p.sample_period()); }

CVector kron(std::span<const cplx> a, std::span<const cplx> b) {
  CVector out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(x * y);
  }
  return out;
}

CVector echo_template(std::span<const cplx> tx_spectrum, double tau, double nu, const OtfsParams& p) {
  if (tx_spectrum.size() != p.frame_samples()) throw std::invalid_argument("echo_template: length mismatch");
  const auto b = steering_b(tau, p);
  CVector t(tx_spectrum.size());
  for (std::size_t n = 0; n < t.size(); ++n) t[n] = tx_spectrum[n] * b[n];
  fft::idft_unitary(t);
  const auto c = steering_c(nu, p);
  for (std::size_t l = 0; l < t.size(); ++l) t[l] *= c[l];
  return t;
}

RxSignal model_rx(std::span<const cplx> tx_samples, const TargetSet& targets, const OtfsParams& p, double sigma2,
                  std::uint64_t seed) {
  if (tx_samples.size() != p.frame_samples()) throw std::invalid_argument("model_rx: transmit length mismatch");
  check_delays_within_prefix(targets, p);
  const auto spectrum = fft::dft(tx_samples);

  RxSignal rx;
  rx.noise_seed = seed;
  rx.samples.assign(p.frame_samples(), cplx{});
  for (const auto& tap : targets.taps) {
    const auto t = echo_template(spectrum, tap.delay_s, tap.doppler_hz, p);
    for (std::size_t l = 0; l < t.size(); ++l) rx.samples[l] += tap.gain * t[l];
  }
  add_noise(rx.samples, sigma2, seed);
  return rx;
}

}  // namespace otfs
