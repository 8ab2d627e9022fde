// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "otfs/channel.hpp"
#include "otfs/modem.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

otfs::TargetSet one(otfs::cplx gain, double tau, double nu) { return {{{gain, tau, nu}}}; }

}  // namespace

TEST_CASE("identity channel returns the transmit samples", "[channel]") {
  const auto p = otfs::preset_params("isi-regime");
  const auto frame = otfs::generate_frame(p, 1);
  const auto s = otfs::heisenberg_samples(frame).samples;
  const auto y = otfs::synthesize_rx(frame, one(1.0, 0.0, 0.0), p, 0.0, 9).samples;
  CHECK(oracle::rel_l2(y, s) < 1e-14);
}

TEST_CASE("on-grid delay is a circular shift, Doppler a phase ramp", "[channel]") {
  const auto p = otfs::preset_params("isi-regime");
  const auto frame = otfs::generate_frame(p, 2);
  const auto s = otfs::heisenberg_samples(frame).samples;
  const double ts = p.sample_period();

  const auto y = otfs::synthesize_rx(frame, one(1.0, 3 * ts, 0.0), p, 0.0, 0).samples;
  CHECK(oracle::rel_l2(y, oracle::circular_shift(s, 3)) < 1e-12);

  const otfs::cplx alpha{0.3, -1.1};
  const double nu = 2.7e6;  // well beyond 1/T
  const auto yd = otfs::synthesize_rx(frame, one(alpha, 40 * ts, nu), p, 0.0, 0).samples;
  const auto shifted = oracle::circular_shift(s, 40);
  otfs::CVector expected(s.size());
  for (std::size_t l = 0; l < s.size(); ++l) {
    expected[l] = alpha * shifted[l] * oracle::expj(2.0 * std::numbers::pi * nu * static_cast<double>(l) * ts);
  }
  CHECK(oracle::rel_l2(yd, expected) < 1e-10);
}

TEST_CASE("fractional delays follow the continuous-time definition", "[channel]") {
  const auto p = oracle::small_params();
  const auto frame = otfs::generate_frame(p, 5);
  const double ts = p.sample_period();
  for (const double tau_samples : {0.5, 1.5, 7.25, 30.9}) {
    const double tau = tau_samples * ts;
    const double nu = 123e3;
    const auto y = otfs::synthesize_rx(frame, one({0.0, 2.0}, tau, nu), p, 0.0, 0).samples;
    for (std::size_t l = 0; l < y.size(); ++l) {
      const double t = static_cast<double>(l) * ts;
      const auto expected = otfs::cplx{0.0, 2.0} * oracle::tx_waveform(t - tau, frame.ft(), p) *
                            oracle::expj(2.0 * std::numbers::pi * nu * t);
      CHECK(std::abs(y[l] - expected) < 1e-12);
    }
  }
}

TEST_CASE("superposition and Doppler separability", "[channel]") {
  const auto p = otfs::preset_params("isi-regime");
  const auto frame = otfs::generate_frame(p, 6);
  const double ts = p.sample_period();
  const otfs::Target a{{1.0, 0.5}, 12.3 * ts, 1.1e5};
  const otfs::Target b{{-0.2, 0.9}, 200 * ts, -4.4e6};
  const auto ya = otfs::synthesize_rx(frame, {{a}}, p, 0.0, 0).samples;
  const auto yb = otfs::synthesize_rx(frame, {{b}}, p, 0.0, 0).samples;
  const auto yab = otfs::synthesize_rx(frame, {{a, b}}, p, 0.0, 0).samples;
  otfs::CVector sum(ya.size());
  for (std::size_t l = 0; l < sum.size(); ++l) sum[l] = ya[l] + yb[l];
  CHECK(oracle::rel_l2(yab, sum) < 1e-13);

  // De-rotating by the Doppler ramp removes all dependence on nu.
  const double tau = 57.5 * ts;
  const auto y1 = otfs::synthesize_rx(frame, one(1.0, tau, 0.0), p, 0.0, 0).samples;
  for (const double nu : {3e3, -7.7e5, 2.2e7}) {
    auto y2 = otfs::synthesize_rx(frame, one(1.0, tau, nu), p, 0.0, 0).samples;
    for (std::size_t l = 0; l < y2.size(); ++l) {
      y2[l] *= oracle::expj(-2.0 * std::numbers::pi * nu * static_cast<double>(l) * ts);
    }
    CHECK(oracle::rel_l2(y2, y1) < 1e-10);
  }
}

TEST_CASE("noise statistics and reproducibility", "[channel]") {
  const auto p = otfs::preset_params("isi-regime");
  const auto frame = otfs::generate_frame(p, 7);
  const auto y = otfs::synthesize_rx(frame, {}, p, 1.0, 100).samples;
  const double var = otfs::squared_norm(y) / static_cast<double>(y.size());
  CHECK(std::abs(var - 1.0) < 0.05);

  CHECK(otfs::synthesize_rx(frame, {}, p, 1.0, 100).samples == y);
  const auto z = otfs::synthesize_rx(frame, {}, p, 1.0, 101).samples;
  otfs::cplx cross{};
  for (std::size_t l = 0; l < y.size(); ++l) cross += y[l] * std::conj(z[l]);
  // Independent draws: normalized cross-correlation ~ 1/sqrt(NM) = 0.016.
  CHECK(std::abs(cross) / static_cast<double>(y.size()) < 0.05);

  double re = 0.0, im = 0.0;
  for (const auto& v : y) {
    re += v.real() * v.real();
    im += v.imag() * v.imag();
  }
  CHECK_THAT(re / static_cast<double>(y.size()), WithinAbs(0.5, 0.04));
  CHECK_THAT(im / static_cast<double>(y.size()), WithinAbs(0.5, 0.04));
}

TEST_CASE("delays beyond the prefix are rejected", "[channel]") {
  const auto p = otfs::preset_params("isi-regime");
  const auto frame = otfs::generate_frame(p, 7);
  CHECK_THROWS_AS(otfs::synthesize_rx(frame, one(1.0, 7.7e-6, 0.0), p, 0.0, 0), std::domain_error);
  CHECK_THROWS_AS(otfs::synthesize_rx(frame, one(1.0, -1e-9, 0.0), p, 0.0, 0), std::domain_error);
  CHECK_NOTHROW(otfs::synthesize_rx(frame, one(1.0, p.cp_duration(), 0.0), p, 0.0, 0));
  CHECK_THROWS_AS(otfs::synthesize_rx(frame, {}, p, -1.0, 0), std::invalid_argument);
}

TEST_CASE("SNR to gain", "[channel]") {
  CHECK_THAT(std::abs(otfs::snr_to_gain(0.0, 1.0, 1)), WithinRel(1.0, 1e-14));
  CHECK_THAT(std::norm(otfs::snr_to_gain(25.0, 1.0, 2)), WithinRel(316.22776601683796, 1e-12));
  CHECK_THAT(std::norm(otfs::snr_to_gain(20.0, 4.0, 3)), WithinRel(400.0, 1e-12));
  CHECK(otfs::snr_to_gain(10.0, 1.0, 4) == otfs::snr_to_gain(10.0, 1.0, 4));

  // Phase is uniform: the mean of e^{j phi} over many seeds is near zero.
  otfs::cplx mean{};
  for (std::uint64_t s = 0; s < 4000; ++s) mean += otfs::snr_to_gain(0.0, 1.0, s);
  CHECK(std::abs(mean) / 4000.0 < 0.05);

  const otfs::TargetSet ts{{{otfs::cplx{3.0, 4.0}, 1e-6, 8000.0}}};
  const auto p = otfs::preset_params("isi-regime").with_propagation_speed(3e8);
  CHECK_THAT(ts.snr(0, 1.0), WithinRel(25.0, 1e-14));
  CHECK_THAT(ts.range_m(0, p), WithinRel(150.0, 1e-14));
  CHECK_THAT(ts.velocity_mps(0, p), WithinRel(20.0, 1e-14));
}
