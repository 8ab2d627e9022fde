// SPDX-License-Identifier: Apache-2.0
#include "otfs/glrt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "otfs/fft.hpp"
#include "otfs/parallel.hpp"
#include "otfs/steering.hpp"

namespace otfs {

DetectionGrid DetectionGrid::make(const OtfsParams& p, std::size_t os_tau, std::size_t os_nu,
                                  std::optional<double> tau_search_max, std::optional<double> nu_search) {
  if (os_tau == 0 || os_nu == 0) throw std::invalid_argument("oversampling factors must be >= 1");
  const auto lim = derive_limits(p);
  const double tau_max = tau_search_max.value_or(p.cp_duration());
  const double nu_span = nu_search.value_or(lim.nu_max_ici);
  if (!(tau_max >= 0.0) || tau_max > lim.tau_max_isi * (1.0 + 1e-12)) {
    throw std::invalid_argument("delay search region exceeds the unambiguous delay min(M/df, Tcp)");
  }
  if (!(nu_span > 0.0) || nu_span > lim.nu_max_ici * (1.0 + 1e-12)) {
    throw std::invalid_argument("Doppler search region exceeds the unambiguous Doppler N/T");
  }

  DetectionGrid g;
  g.os_tau = os_tau;
  g.os_nu = os_nu;

  const std::size_t delay_period = p.frame_samples() * os_tau;  // bins per M/df
  g.delay.step = p.delay_step() / static_cast<double>(os_tau);
  g.delay.origin = 0.0;
  g.delay.size = static_cast<std::size_t>(std::floor(tau_max / g.delay.step + 1e-9)) + 1;
  if (g.delay.size >= delay_period) {
    g.delay.size = delay_period;
    g.delay.periodic = true;
  }

  const std::size_t doppler_period = p.frame_samples() * os_nu;  // bins per N/T
  g.doppler.step = p.doppler_step() / static_cast<double>(os_nu);
  g.doppler.size = std::min<std::size_t>(
      std::max<std::size_t>(1, static_cast<std::size_t>(std::nearbyint(nu_span / g.doppler.step))), doppler_period);
  g.doppler.origin = -static_cast<double>(g.doppler.size / 2) * g.doppler.step;
  g.doppler.periodic = g.doppler.size == doppler_period;
  return g;
}

GlrtEvaluator::GlrtEvaluator(std::span<const cplx> y, std::span<const cplx> s, double sigma2, const OtfsParams& params)
    : params_(params), y_(y.begin(), y.end()), s_(s.begin(), s.end()), sigma2_(sigma2) {
  if (y.size() != params.frame_samples() || s.size() != params.frame_samples()) {
    throw std::invalid_argument("GLRT: y and s must have length NM");
  }
  if (!(sigma2 > 0.0)) throw std::invalid_argument("GLRT: noise variance must be positive");
  tx_energy_ = squared_norm(s);
  if (!(tx_energy_ > 0.0)) throw std::invalid_argument("GLRT: statistic undefined for a zero transmit signal");
  tx_spectrum_ = fft::dft(s);
}

CVector GlrtEvaluator::doppler_spectrum(double nu) const {
  const auto c = steering_c(nu, params_);
  CVector z(y_.size());
  for (std::size_t l = 0; l < z.size(); ++l) z[l] = std::conj(c[l]) * y_[l];
  fft::dft_unitary(z);
  return z;
}

cplx GlrtEvaluator::correlate_spectrum(std::span<const cplx> z, double tau) const {
  if (z.size() != tx_spectrum_.size()) throw std::invalid_argument("correlate_spectrum: length mismatch");
  const auto b = steering_b(tau, params_);
  cplx acc{};
  for (std::size_t n = 0; n < z.size(); ++n) acc += std::conj(tx_spectrum_[n] * b[n]) * z[n];
  return acc;
}

cplx GlrtEvaluator::correlate(double tau, double nu) const { return correlate_spectrum(doppler_spectrum(nu), tau); }

double GlrtEvaluator::statistic(double tau, double nu) const {
  return std::norm(correlate(tau, nu)) / (sigma2_ * tx_energy_);
}

cplx GlrtEvaluator::alpha(double tau, double nu) const { return correlate(tau, nu) / tx_energy_; }

StatisticMap GlrtEvaluator::map(const DetectionGrid& grid, MapStrategy strategy, bool keep_alpha) const {
  StatisticMap out;
  out.delay = grid.delay;
  out.doppler = grid.doppler;
  out.values = RMatrix(grid.delay.size, grid.doppler.size);
  if (keep_alpha) out.alpha = CMatrix(grid.delay.size, grid.doppler.size);

  if (strategy == MapStrategy::automatic) {
    // Both paths do two transforms per outer bin; iterate over the shorter axis.
    strategy = grid.delay.size <= grid.doppler.size ? MapStrategy::delay_major : MapStrategy::doppler_major;
  }
  if (strategy == MapStrategy::delay_major) {
    fill_delay_major(grid, out, keep_alpha);
  } else {
    fill_doppler_major(grid, out, keep_alpha);
  }
  return out;
}

void GlrtEvaluator::fill_doppler_major(const DetectionGrid& grid, StatisticMap& out, bool keep_alpha) const {
  const std::size_t nm = params_.frame_samples();
  const std::size_t padded = nm * grid.os_tau;
  const double norm = sigma2_ * tx_energy_;
  const double ts = params_.sample_period();

  parallel_for(grid.doppler.size, [&](std::size_t j) {
    const double nu_cycles = grid.doppler.value(j) * ts;
    CVector buf(padded, cplx{});
    for (std::size_t l = 0; l < nm; ++l) buf[l] = y_[l] * cis_cycles(-nu_cycles * static_cast<double>(l));
    fft::dft_unitary(std::span<cplx>(buf).first(nm));
    for (std::size_t n = 0; n < nm; ++n) buf[n] *= std::conj(tx_spectrum_[n]);
    // Unnormalized inverse: entry i applies conj(b(i T / (N os_tau))).
    fft::transform(buf, fft::Direction::inverse);
    for (std::size_t i = 0; i < grid.delay.size; ++i) {
      out.values(i, j) = std::norm(buf[i]) / norm;
      if (keep_alpha) out.alpha(i, j) = buf[i] / tx_energy_;
    }
  });
}

void GlrtEvaluator::fill_delay_major(const DetectionGrid& grid, StatisticMap& out, bool keep_alpha) const {
  const std::size_t nm = params_.frame_samples();
  const std::size_t padded = nm * grid.os_nu;
  const double norm = sigma2_ * tx_energy_;

  parallel_for(grid.delay.size, [&](std::size_t i) {
    CVector tmpl(nm);
    if (i % grid.os_tau == 0) {
      // On the sample grid F^H B F s is a plain circular shift of s.
      const std::size_t shift = (i / grid.os_tau) % nm;
      for (std::size_t l = 0; l < nm; ++l) tmpl[l] = s_[(l + nm - shift) % nm];
    } else {
      const auto b = steering_b(grid.delay.value(i), params_);
      for (std::size_t n = 0; n < nm; ++n) tmpl[n] = tx_spectrum_[n] * b[n];
      fft::idft_unitary(tmpl);
    }
    CVector buf(padded, cplx{});
    for (std::size_t l = 0; l < nm; ++l) buf[l] = std::conj(tmpl[l]) * y_[l];
    // Unnormalized forward transform: bin k applies conj(c(k / (M T os_nu))).
    fft::transform(buf, fft::Direction::forward);
    const auto origin_bins = static_cast<long long>(std::nearbyint(grid.doppler.origin / grid.doppler.step));
    const auto period = static_cast<long long>(padded);
    for (std::size_t j = 0; j < grid.doppler.size; ++j) {
      long long k = (origin_bins + static_cast<long long>(j)) % period;
      if (k < 0) k += period;
      const cplx v = buf[static_cast<std::size_t>(k)];
      out.values(i, j) = std::norm(v) / norm;
      if (keep_alpha) out.alpha(i, j) = v / tx_energy_;
    }
  });
}

double glrt_statistic(std::span<const cplx> y, std::span<const cplx> s, double sigma2, double tau, double nu,
                      const OtfsParams& params) {
  return GlrtEvaluator(y, s, sigma2, params).statistic(tau, nu);
}

cplx estimate_alpha(std::span<const cplx> y, std::span<const cplx> s, double tau, double nu,
                    const OtfsParams& params) {
  return GlrtEvaluator(y, s, 1.0, params).alpha(tau, nu);
}

StatisticMap glrt_map(std::span<const cplx> y, std::span<const cplx> s, double sigma2, const DetectionGrid& grid,
                      const OtfsParams& params, MapStrategy strategy) {
  return GlrtEvaluator(y, s, sigma2, params).map(grid, strategy);
}

RefinedPeak refine_peak(const GlrtEvaluator& ev, double tau, double nu, double coarse_delay_step,
                        double coarse_doppler_step, std::size_t os_tau, std::size_t os_nu) {
  if (os_tau == 0 || os_nu == 0) throw std::invalid_argument("refine_peak: oversampling must be >= 1");
  const double dt = coarse_delay_step / static_cast<double>(os_tau);
  const double dn = coarse_doppler_step / static_cast<double>(os_nu);
  const auto half_t = static_cast<long>(os_tau);
  const auto half_n = static_cast<long>(os_nu);
  const auto width_t = static_cast<std::size_t>(2 * half_t + 1);
  const auto width_n = static_cast<std::size_t>(2 * half_n + 1);
  const double tau_floor = 0.0;
  const double tau_ceil = derive_limits(ev.params()).tau_max_isi;

  const double norm = ev.noise_variance() * ev.tx_energy();
  RMatrix local(width_t, width_n);
  for (std::size_t b = 0; b < width_n; ++b) {
    const double nu_b = nu + static_cast<double>(static_cast<long>(b) - half_n) * dn;
    const auto z = ev.doppler_spectrum(nu_b);
    for (std::size_t a = 0; a < width_t; ++a) {
      const double tau_a = tau + static_cast<double>(static_cast<long>(a) - half_t) * dt;
      local(a, b) = (tau_a < tau_floor || tau_a > tau_ceil) ? 0.0 : std::norm(ev.correlate_spectrum(z, tau_a)) / norm;
    }
  }

  std::size_t best_a = static_cast<std::size_t>(half_t);
  std::size_t best_b = static_cast<std::size_t>(half_n);
  for (std::size_t a = 0; a < width_t; ++a) {
    for (std::size_t b = 0; b < width_n; ++b) {
      if (local(a, b) > local(best_a, best_b)) {
        best_a = a;
        best_b = b;
      }
    }
  }

  double off_t = 0.0;
  double off_n = 0.0;
  if (best_a > 0 && best_a + 1 < width_t) {
    off_t = parabolic_offset(local(best_a - 1, best_b), local(best_a, best_b), local(best_a + 1, best_b));
  }
  if (best_b > 0 && best_b + 1 < width_n) {
    off_n = parabolic_offset(local(best_a, best_b - 1), local(best_a, best_b), local(best_a, best_b + 1));
  }
  RefinedPeak peak;
  peak.delay_s = tau + (static_cast<double>(static_cast<long>(best_a) - half_t) + off_t) * dt;
  peak.doppler_hz = nu + (static_cast<double>(static_cast<long>(best_b) - half_n) + off_n) * dn;
  peak.value = local(best_a, best_b);
  return peak;
}

}  // namespace otfs
