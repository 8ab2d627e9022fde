// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

#include "otfs/params.hpp"
#include "otfs/types.hpp"

namespace otfs {

enum class Constellation { qpsk, qam16 };
Constellation parse_constellation(std::string_view tag);

enum class PulseShape { rectangular };

/// N x M transmit grid in the delay-Doppler domain together with its
/// frequency-time image X = F_N X_dd F_M^H (rows = subcarriers, cols = symbols).
class DelayDopplerFrame {
 public:
  DelayDopplerFrame(const OtfsParams& params, CMatrix x_dd);

  const CMatrix& dd() const { return x_dd_; }
  const CMatrix& ft() const { return x_ft_; }
  std::size_t n_subcarriers() const { return x_dd_.rows(); }
  std::size_t n_symbols() const { return x_dd_.cols(); }

  /// Column m of the frequency-time grid, i.e. the subcarrier weights of symbol m.
  std::span<const cplx> symbol(std::size_t m) const { return per_symbol_.row(m); }

 private:
  CMatrix x_dd_;
  CMatrix x_ft_;
  CMatrix per_symbol_;  // transpose of x_ft_
};

/// ISFFT: unitary N-point DFT down the columns, unitary M-point IDFT along the rows.
CMatrix isfft(const CMatrix& x_dd);
/// SFFT, the inverse of isfft.
CMatrix sfft(const CMatrix& x_ft);

/// Random unit-energy data frame. Deterministic in the seed.
DelayDopplerFrame generate_frame(const OtfsParams& params, std::uint64_t seed,
                                 Constellation constellation = Constellation::qpsk);

struct TxSignal {
  CVector samples;  // s[l] = s(l T/N), l = 0..NM-1
  PulseShape pulse = PulseShape::rectangular;
};

/// Samples of the Heisenberg-transformed frame: per-symbol unitary N-point
/// IDFT of each frequency-time column, concatenated in time.
TxSignal heisenberg_samples(const DelayDopplerFrame& frame);

/// s_CP(t) for t in [-Tcp, MT], evaluated in closed form (rectangular pulse).
/// Throws std::out_of_range outside that interval.
cplx evaluate_tx_cp(double t, const DelayDopplerFrame& frame, const OtfsParams& params);

/// Same as evaluate_tx_cp with time expressed in samples (t = u T/N).
/// The prefix is the cyclic extension, so any u in [-NM, NM] is accepted here.
/// Values within 1e-9 samples of an integer are snapped onto the sample grid.
cplx evaluate_tx_samples(double u, const DelayDopplerFrame& frame);

}  // namespace otfs
