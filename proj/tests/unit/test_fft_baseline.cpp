// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "otfs/channel.hpp"
#include "otfs/fft_baseline.hpp"
#include "otfs/glrt.hpp"
#include "otfs/modem.hpp"

using Catch::Matchers::WithinRel;

namespace {

std::pair<std::size_t, std::size_t> argmax(const otfs::RMatrix& m) {
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) > m(bi, bj)) {
        bi = i;
        bj = j;
      }
  return {bi, bj};
}

// Peak over the largest value outside the peak's 3x3 (wrapped) neighbourhood.
double peak_to_sidelobe(const otfs::RMatrix& m) {
  const auto [pi, pj] = argmax(m);
  double side = 0.0;
  const auto R = m.rows(), C = m.cols();
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) {
      const auto di = std::min((i + R - pi) % R, (pi + R - i) % R);
      const auto dj = std::min((j + C - pj) % C, (pj + C - j) % C);
      if (di > 1 || dj > 1) side = std::max(side, m(i, j));
    }
  return m(pi, pj) / side;
}

// Frame whose every frequency-time column is identical (data only in the
// zero-Doppler column of the delay-Doppler grid).
otfs::DelayDopplerFrame repeating_frame(const otfs::OtfsParams& p, std::uint64_t seed) {
  const auto random = otfs::generate_frame(p, seed);
  otfs::CMatrix dd(p.n_subcarriers(), p.n_symbols());
  for (std::size_t n = 0; n < dd.rows(); ++n) dd(n, 0) = random.dd()(n, 0) * std::sqrt(double(p.n_symbols()));
  return otfs::DelayDopplerFrame(p, dd);
}

}  // namespace

TEST_CASE("identity channel gives a single impulse at the origin", "[baseline]") {
  const auto p = otfs::preset_params("isi-regime");
  const auto frame = otfs::generate_frame(p, 1);
  const auto s = otfs::heisenberg_samples(frame).samples;
  const auto map = otfs::ofdm_2dfft(s, frame, p);
  REQUIRE(map.values.rows() == 64);
  REQUIRE(map.values.cols() == 64);
  CHECK(argmax(map.values) == std::pair<std::size_t, std::size_t>{0, 32});
  CHECK_THAT(map.values(0, 32), WithinRel(4096.0, 1e-10));
  CHECK(peak_to_sidelobe(map.values) > 100.0);
  CHECK(map.delay.periodic);
  CHECK(map.doppler.periodic);
  CHECK_THAT(map.doppler.value(0), WithinRel(-p.subcarrier_spacing() / 2.0, 1e-14));
}

TEST_CASE("zero observation gives a zero map", "[baseline]") {
  const auto p = oracle::small_params();
  const auto frame = otfs::generate_frame(p, 2);
  const auto map = otfs::ofdm_2dfft(otfs::CVector(32), frame, p);
  for (const auto v : map.values.flat()) CHECK(v == 0.0);
}

TEST_CASE("mild targets land at their folded bins", "[baseline]") {
  const auto p = otfs::preset_params("isi-regime");
  const auto frame = otfs::generate_frame(p, 3);
  const double ts = p.sample_period(), ds = p.doppler_step();
  for (const auto [d, v] : {std::pair{3.4, 2.3}, {1.0, -5.0}, {6.6, 9.8}}) {
    const auto y = otfs::synthesize_rx(frame, {{{1.0, d * ts, v * ds}}}, p, 0.0, 0).samples;
    const auto map = otfs::ofdm_2dfft(y, frame, p);
    const auto [bi, bj] = argmax(map.values);
    CHECK(std::abs(static_cast<double>(bi) - d) <= 1.0);
    CHECK(std::abs(static_cast<double>(bj) - 32.0 - v) <= 1.0);
  }
}

TEST_CASE("delay one ambiguity out folds for a repeating frame", "[baseline]") {
  const auto p = otfs::preset_params("isi-regime");
  const auto frame = repeating_frame(p, 4);
  const double ts = p.sample_period();
  const double tau0 = 5 * ts;
  const auto y = otfs::synthesize_rx(frame, {{{1.0, tau0 + 1.0 / p.subcarrier_spacing(), 0.0}}}, p, 0.0, 0).samples;
  const auto map = otfs::ofdm_2dfft(y, frame, p);
  CHECK(argmax(map.values) == std::pair<std::size_t, std::size_t>{5, 32});
  // A repeated QPSK column can sum to exactly zero on some subcarrier; those
  // cells are erased, and the coherent peak is (kept cells)^2 / NM.
  double kept = 0.0;
  for (const auto x : frame.ft().flat()) kept += std::abs(x) < otfs::kDivisionFloor ? 0.0 : 1.0;
  CHECK(kept >= 4032.0);
  CHECK_THAT(map.values(5, 32), WithinRel(kept * kept / 4096.0, 1e-9));
}

TEST_CASE("delay one ambiguity out: GLRT resolves, baseline loses coherence", "[baseline]") {
  const auto p = otfs::preset_params("isi-regime");
  const auto frame = otfs::generate_frame(p, 5);
  const auto s = otfs::heisenberg_samples(frame).samples;
  const double ts = p.sample_period();
  const double tau = 5 * ts + 1.0 / p.subcarrier_spacing();
  const auto y = otfs::synthesize_rx(frame, {{{1.0, tau, 0.0}}}, p, 0.0, 0).samples;

  const auto glrt = otfs::glrt_map(y, s, 1.0, otfs::DetectionGrid::make(p), p);
  CHECK(argmax(glrt.values) == std::pair<std::size_t, std::size_t>{69, 2048});

  // Per-symbol data changes from one symbol to the next, so the
  // spectral division cannot recover a coherent peak at the folded bin.
  const auto base = otfs::ofdm_2dfft(y, frame, p);
  CHECK(base.values(5, 32) < 0.01 * 4096.0);
}

TEST_CASE("ISI degrades the baseline while the GLRT peak is delay invariant", "[baseline]") {
  const auto p = otfs::preset_params("isi-regime");
  const auto frame = otfs::generate_frame(p, 6);
  const auto s = otfs::heisenberg_samples(frame).samples;
  const double ts = p.sample_period();
  double prev_psr = std::numeric_limits<double>::infinity();
  for (const std::size_t d : {0u, 16u, 40u}) {
    const double tau = static_cast<double>(d) * ts;
    const auto y = otfs::synthesize_rx(frame, {{{1.0, tau, 0.0}}}, p, 0.0, 0).samples;
    const double psr = peak_to_sidelobe(otfs::ofdm_2dfft(y, frame, p).values);
    CHECK(psr < prev_psr);
    prev_psr = psr;
    CHECK_THAT(otfs::glrt_statistic(y, s, 1.0, tau, 0.0, p), WithinRel(4096.0, 1e-6));
  }
}

TEST_CASE("noise-only baseline map: energy matches the spectral division", "[baseline]") {
  const auto p = otfs::preset_params("ici-regime");
  const auto frame = otfs::generate_frame(p, 7);
  const auto y = otfs::synthesize_rx(frame, {}, p, 3.0, 8).samples;
  const auto map = otfs::ofdm_2dfft(y, frame, p, 3.0);
  double sum = 0.0;
  for (const auto v : map.values.flat()) sum += v;

  // The frequency-time image of a QPSK delay-Doppler frame is not constant
  // modulus, so each cell's noise is scaled by 1/|X|^2. The remaining
  // transforms are unitary, so the map energy is that of Y/X.
  const std::size_t n = p.n_subcarriers();
  double energy = 0.0, inv = 0.0;
  for (std::size_t m = 0; m < p.n_symbols(); ++m) {
    const otfs::CVector block(y.begin() + static_cast<std::ptrdiff_t>(m * n),
                              y.begin() + static_cast<std::ptrdiff_t>((m + 1) * n));
    const auto spec = oracle::direct_dft(block);
    for (std::size_t k = 0; k < n; ++k) {
      const auto x = frame.ft()(k, m);
      if (std::abs(x) < otfs::kDivisionFloor) continue;
      energy += std::norm(spec[k] / x) / 3.0;
      inv += 1.0 / std::norm(x);
    }
  }
  CHECK_THAT(sum, WithinRel(energy, 1e-9));
  // Not unit-mean: the floor is lifted by the average 1/|X|^2.
  CHECK(inv / static_cast<double>(map.values.size()) > 1.0);
}

TEST_CASE("baseline preconditions", "[baseline]") {
  const auto p = oracle::small_params();
  const auto frame = otfs::generate_frame(p, 2);
  CHECK_THROWS_AS(otfs::ofdm_2dfft(otfs::CVector(31), frame, p), std::invalid_argument);
  CHECK_THROWS_AS(otfs::ofdm_2dfft(otfs::CVector(32), frame, p, 0.0), std::invalid_argument);

  // Erased cells: a zero transmit subcarrier contributes nothing.
  otfs::CMatrix ft = frame.ft();
  for (std::size_t m = 0; m < 4; ++m) ft(3, m) = 0.0;
  const otfs::DelayDopplerFrame holed(p, otfs::sfft(ft));
  const auto y = otfs::heisenberg_samples(holed).samples;
  const auto map = otfs::ofdm_2dfft(y, holed, p);
  CHECK(std::isfinite(map.values(0, 2)));
  CHECK_THAT(map.values(0, 2), WithinRel(7.0 * 7.0 * 4.0 / 8.0, 1e-9));
}
