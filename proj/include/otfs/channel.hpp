// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "otfs/modem.hpp"
#include "otfs/params.hpp"

namespace otfs {

struct Target {
  cplx gain{1.0, 0.0};
  double delay_s = 0.0;
  double doppler_hz = 0.0;
};

/// Point-target channel taps. An empty set is the noise-only hypothesis.
struct TargetSet {
  std::vector<Target> taps;

  std::size_t size() const { return taps.size(); }
  bool empty() const { return taps.empty(); }

  double range_m(std::size_t k, const OtfsParams& p) const { return p.delay_to_range(taps.at(k).delay_s); }
  double velocity_mps(std::size_t k, const OtfsParams& p) const {
    return p.doppler_to_velocity(taps.at(k).doppler_hz);
  }
  double snr(std::size_t k, double sigma2) const { return std::norm(taps.at(k).gain) / sigma2; }
};

/// Throws std::domain_error if any delay is negative or exceeds the prefix.
void check_delays_within_prefix(const TargetSet& targets, const OtfsParams& params);

struct RxSignal {
  CVector samples;
  std::uint64_t noise_seed = 0;
};

/// Backscatter sampled at l T/N on [0, MT) after prefix removal:
///   y[l] = sum_k alpha_k s_CP(l T/N - tau_k) e^{j 2 pi nu_k l T/N} + w[l],
/// with s_CP evaluated in closed form and w ~ CN(0, sigma2) i.i.d.
RxSignal synthesize_rx(const DelayDopplerFrame& frame, const TargetSet& targets, const OtfsParams& params,
                       double sigma2, std::uint64_t seed);

/// Adds i.i.d. CN(0, sigma2) samples drawn from the seed. sigma2 == 0 is a no-op.
void add_noise(std::span<cplx> y, double sigma2, std::uint64_t seed);

/// |alpha|^2 = sigma2 * 10^(snr_db/10), phase uniform on [0, 2 pi) drawn from the seed.
cplx snr_to_gain(double snr_db, double sigma2, std::uint64_t seed);

}  // namespace otfs
