// SPDX-License-Identifier: Apache-2.0
#include "otfs/fft_baseline.hpp"

#include <stdexcept>

#include "otfs/fft.hpp"

namespace otfs {

RangeDopplerMap ofdm_2dfft(std::span<const cplx> y, const DelayDopplerFrame& frame, const OtfsParams& params,
                           double noise_variance) {
  const std::size_t n = params.n_subcarriers();
  const std::size_t m = params.n_symbols();
  if (y.size() != n * m) throw std::invalid_argument("ofdm_2dfft: y must have length NM");
  if (frame.n_subcarriers() != n || frame.n_symbols() != m) {
    throw std::invalid_argument("ofdm_2dfft: frame does not match params");
  }
  if (!(noise_variance > 0.0)) throw std::invalid_argument("ofdm_2dfft: noise variance must be positive");

  // grid(m, i): symbol-major so each symbol's fast-time block is contiguous.
  CMatrix grid(m, n);
  for (std::size_t k = 0; k < m; ++k) {
    auto col = grid.row(k);
    std::copy_n(y.begin() + static_cast<std::ptrdiff_t>(k * n), n, col.begin());
    fft::dft_unitary(col);
    const auto tx = frame.symbol(k);
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = std::abs(tx[i]) < kDivisionFloor ? cplx{} : col[i] / tx[i];
    }
    fft::idft_unitary(col);  // subcarrier -> delay
  }

  RangeDopplerMap out;
  out.values = RMatrix(n, m);
  out.delay = {.origin = 0.0, .step = params.delay_step(), .size = n, .periodic = true};
  const std::size_t half = m / 2;
  out.doppler = {.origin = -static_cast<double>(half) * params.doppler_step(),
                 .step = params.doppler_step(),
                 .size = m,
                 .periodic = true};

  CVector slow(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) slow[k] = grid(k, i);
    fft::dft_unitary(slow);  // symbol -> Doppler
    for (std::size_t j = 0; j < m; ++j) {
      out.values(i, j) = std::norm(slow[(j + m - half) % m]) / noise_variance;
    }
  }
  return out;
}

}  // namespace otfs
