// SPDX-License-Identifier: Apache-2.0
#include "otfs/modem.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "otfs/fft.hpp"

namespace otfs {

Constellation parse_constellation(std::string_view tag) {
  if (tag == "qpsk" || tag == "QPSK") return Constellation::qpsk;
  if (tag == "16qam" || tag == "16QAM" || tag == "qam16") return Constellation::qam16;
  throw std::invalid_argument("unknown constellation '" + std::string(tag) + "'");
}

CMatrix isfft(const CMatrix& x_dd) {
  const std::size_t n = x_dd.rows();
  const std::size_t m = x_dd.cols();
  CMatrix out = x_dd;
  CVector col(n);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t r = 0; r < n; ++r) col[r] = out(r, c);
    fft::dft_unitary(col);
    for (std::size_t r = 0; r < n; ++r) out(r, c) = col[r];
  }
  for (std::size_t r = 0; r < n; ++r) fft::idft_unitary(out.row(r));
  return out;
}

CMatrix sfft(const CMatrix& x_ft) {
  const std::size_t n = x_ft.rows();
  const std::size_t m = x_ft.cols();
  CMatrix out = x_ft;
  for (std::size_t r = 0; r < n; ++r) fft::dft_unitary(out.row(r));
  CVector col(n);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t r = 0; r < n; ++r) col[r] = out(r, c);
    fft::idft_unitary(col);
    for (std::size_t r = 0; r < n; ++r) out(r, c) = col[r];
  }
  return out;
}

DelayDopplerFrame::DelayDopplerFrame(const OtfsParams& params, CMatrix x_dd) : x_dd_(std::move(x_dd)) {
  if (x_dd_.rows() != params.n_subcarriers() || x_dd_.cols() != params.n_symbols()) {
    throw std::invalid_argument("frame dimensions " + std::to_string(x_dd_.rows()) + "x" +
                                std::to_string(x_dd_.cols()) + " do not match params " +
                                std::to_string(params.n_subcarriers()) + "x" + std::to_string(params.n_symbols()));
  }
  x_ft_ = isfft(x_dd_);
  per_symbol_ = CMatrix(x_ft_.cols(), x_ft_.rows());
  for (std::size_t n = 0; n < x_ft_.rows(); ++n) {
    for (std::size_t m = 0; m < x_ft_.cols(); ++m) per_symbol_(m, n) = x_ft_(n, m);
  }
}

DelayDopplerFrame generate_frame(const OtfsParams& params, std::uint64_t seed, Constellation constellation) {
  std::mt19937_64 rng(seed);
  CMatrix x(params.n_subcarriers(), params.n_symbols());
  switch (constellation) {
    case Constellation::qpsk: {
      const double a = 1.0 / std::sqrt(2.0);
      for (auto& v : x.flat()) {
        const auto bits = rng();
        v = {(bits & 1U) ? a : -a, (bits & 2U) ? a : -a};
      }
      break;
    }
    case Constellation::qam16: {
      const double a = 1.0 / std::sqrt(10.0);
      static constexpr double kLevels[4] = {-3.0, -1.0, 1.0, 3.0};
      for (auto& v : x.flat()) {
        const auto bits = rng();
        v = {a * kLevels[bits & 3U], a * kLevels[(bits >> 2) & 3U]};
      }
      break;
    }
  }
  return DelayDopplerFrame(params, std::move(x));
}

TxSignal heisenberg_samples(const DelayDopplerFrame& frame) {
  const std::size_t n = frame.n_subcarriers();
  const std::size_t m = frame.n_symbols();
  TxSignal tx;
  tx.samples.resize(n * m);
  for (std::size_t k = 0; k < m; ++k) {
    auto block = std::span<cplx>(tx.samples).subspan(k * n, n);
    const auto sym = frame.symbol(k);
    std::copy(sym.begin(), sym.end(), block.begin());
    fft::idft_unitary(block);
  }
  return tx;
}

cplx evaluate_tx_samples(double u, const DelayDopplerFrame& frame) {
  const std::size_t n = frame.n_subcarriers();
  const std::size_t m = frame.n_symbols();
  const auto total = static_cast<double>(n * m);
  if (!(u >= -total && u <= total)) throw std::out_of_range("evaluate_tx_samples: time outside the frame");

  const double nearest = std::nearbyint(u);
  if (std::abs(u - nearest) < 1e-9) u = nearest;
  if (u < 0.0) u += total;

  auto sym_index = static_cast<std::size_t>(std::floor(u / static_cast<double>(n)));
  if (sym_index >= m) sym_index = m - 1;  // u == NM closes the last symbol
  const double local = u - static_cast<double>(sym_index * n);

  // (1/sqrt(N)) sum_n x_{n,m} e^{j 2 pi n local / N}, Horner form.
  const auto weights = frame.symbol(sym_index);
  const cplx w = cis_cycles(local / static_cast<double>(n));
  cplx acc = weights[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) acc = acc * w + weights[i];
  return acc / std::sqrt(static_cast<double>(n));
}

cplx evaluate_tx_cp(double t, const DelayDopplerFrame& frame, const OtfsParams& params) {
  // Endpoints get the same 1e-9-sample slack as the snapping below.
  const double slack = 1e-9 * params.sample_period();
  if (!(t >= -params.cp_duration() - slack && t <= params.frame_body_duration() + slack)) {
    throw std::out_of_range("evaluate_tx_cp: t outside [-Tcp, MT]");
  }
  return evaluate_tx_samples(t / params.sample_period(), frame);
}

}  // namespace otfs
