// SPDX-License-Identifier: Apache-2.0
// Test-side reference implementations. Deliberately naive: direct O(n^2)
// sums and explicit matrices, sharing no code with the library under test.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "otfs/params.hpp"
#include "otfs/types.hpp"

namespace oracle {

using otfs::cplx;
using otfs::CMatrix;
using otfs::CVector;

inline cplx expj(double phase) { return {std::cos(phase), std::sin(phase)}; }

// [F]_{k,l} = e^{-j 2 pi k l / n} / sqrt(n)
inline CMatrix dft_matrix(std::size_t n) {
  CMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      const double ph = -2.0 * std::numbers::pi * static_cast<double>((k * l) % n) / static_cast<double>(n);
      f(k, l) = scale * expj(ph);
    }
  }
  return f;
}

inline CMatrix hermitian(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  return out;
}

inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
  return out;
}

inline CVector matvec(const CMatrix& a, const CVector& x) {
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * x[k];
  return out;
}

inline CVector direct_dft(const CVector& x, bool inverse = false) {
  const std::size_t n = x.size();
  const double sign = inverse ? 1.0 : -1.0;
  CVector twiddle(n);
  for (std::size_t k = 0; k < n; ++k) {
    twiddle[k] = expj(sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  CVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{};
    for (std::size_t l = 0; l < n; ++l) acc += x[l] * twiddle[(k * l) % n];
    out[k] = acc / std::sqrt(static_cast<double>(n));
  }
  return out;
}

inline double rel_l2(const CVector& a, const CVector& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

inline double rel_fro(const CMatrix& a, const CMatrix& b) {
  CVector va(a.flat().begin(), a.flat().end());
  CVector vb(b.flat().begin(), b.flat().end());
  return rel_l2(va, vb);
}

inline CVector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

inline CMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  CMatrix m(rows, cols);
  const auto v = random_vector(rows * cols, seed);
  std::copy(v.begin(), v.end(), m.flat().begin());
  return m;
}

inline CVector circular_shift(const CVector& s, std::size_t p) {
  const std::size_t n = s.size();
  CVector out(n);
  for (std::size_t l = 0; l < n; ++l) out[l] = s[(l + n - p % n) % n];
  return out;
}

// Small numerology for explicit-matrix checks: N = 8, M = 4, T_cp = M T
// (full-frame prefix so every delay up to M/df is admissible).
inline otfs::OtfsParams small_params(std::size_t n = 8, std::size_t m = 4) {
  const double df = 1e6;
  return otfs::OtfsParams({.n_subcarriers = n,
                           .n_symbols = m,
                           .subcarrier_spacing_hz = df,
                           .cp_duration_s = static_cast<double>(m) / df,
                           .carrier_hz = 10e9,
                           .noise_variance = 1.0,
                           .propagation_speed_mps = 3e8});
}

// Continuous-time transmit waveform straight from its definition: sum over
// symbols and subcarriers of x_ft[n][m] g(t - mT) e^{j 2 pi n df (t - mT)} / sqrt(N),
// rectangular g on [0, T), with the frame prefix as a cyclic copy.
inline cplx tx_waveform(double t, const CMatrix& x_ft, const otfs::OtfsParams& p) {
  const double T = p.symbol_duration();
  const double frame = static_cast<double>(p.n_symbols()) * T;
  if (t < 0.0) t += frame;
  cplx acc{};
  for (std::size_t m = 0; m < p.n_symbols(); ++m) {
    const double local = t - static_cast<double>(m) * T;
    if (local < 0.0 || local >= T) continue;
    for (std::size_t n = 0; n < p.n_subcarriers(); ++n) {
      acc += x_ft(n, m) * expj(2.0 * std::numbers::pi * static_cast<double>(n) * p.subcarrier_spacing() * local);
    }
  }
  return acc / std::sqrt(static_cast<double>(p.n_subcarriers()));
}

}  // namespace oracle
