// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "otfs/channel.hpp"
#include "otfs/params.hpp"

namespace otfs {

/// Frequency-domain steering vector, length NM:
///   b(tau)[n] = exp(-j 2 pi n df tau / M),  frequency sample n df / M.
/// Equal to b_N(tau) (x) b_M(tau); periodic in tau with period M/df.
CVector steering_b(double tau, const OtfsParams& params);

/// Temporal steering vector, length NM:
///   c(nu)[l] = exp(j 2 pi nu l T / N),  time sample l T / N.
/// Equal to c_M(nu) (x) c_N(nu); periodic in nu with period N/T.
CVector steering_c(double nu, const OtfsParams& params);

/// Fast-frequency factor [exp(-j 2 pi i df tau)], i = 0..N-1.
CVector steering_b_fast(double tau, const OtfsParams& params);
/// Slow-frequency (ISI) factor [exp(-j 2 pi j df tau / M)], j = 0..M-1.
CVector steering_b_slow(double tau, const OtfsParams& params);
/// Slow-time factor [exp(j 2 pi m T nu)], m = 0..M-1.
CVector steering_c_slow(double nu, const OtfsParams& params);
/// Fast-time (ICI) factor [exp(j 2 pi p T nu / N)], p = 0..N-1.
CVector steering_c_fast(double nu, const OtfsParams& params);

CVector kron(std::span<const cplx> a, std::span<const cplx> b);

/// Noise-free echo template C(nu) F^H B(tau) F s, given the unitary spectrum F s.
CVector echo_template(std::span<const cplx> tx_spectrum, double tau, double nu, const OtfsParams& params);

/// Discrete received-signal model:
///   y = sum_k alpha_k C(nu_k) F^H B(tau_k) F s + w,  w ~ CN(0, sigma2 I).
/// Uses the same noise stream as synthesize_rx for a given seed.
RxSignal model_rx(std::span<const cplx> tx_samples, const TargetSet& targets, const OtfsParams& params,
                  double sigma2, std::uint64_t seed);

}  // namespace otfs
