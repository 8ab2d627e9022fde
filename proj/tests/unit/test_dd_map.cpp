// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <sstream>

#include "otfs/dd_map.hpp"
#include "otfs/matrix_io.hpp"
#include "otfs/params.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("axis lookup", "[map]") {
  const otfs::MapAxis open{.origin = 0.0, .step = 2.0, .size = 5, .periodic = false};
  CHECK(open.value(3) == 6.0);
  CHECK(open.period() == 10.0);
  CHECK(open.nearest_bin(0.0) == 0);
  CHECK(open.nearest_bin(4.9) == 2);
  CHECK(open.nearest_bin(8.9) == 4);
  CHECK_THROWS_AS(open.nearest_bin(-1.1), std::out_of_range);
  CHECK_THROWS_AS(open.nearest_bin(9.1), std::out_of_range);

  const otfs::MapAxis ring{.origin = -4.0, .step = 1.0, .size = 8, .periodic = true};
  CHECK(ring.nearest_bin(-4.0) == 0);
  CHECK(ring.nearest_bin(4.0) == 0);
  CHECK(ring.nearest_bin(3.2) == 7);
  CHECK(ring.nearest_bin(-13.0) == 7);
  CHECK_THROWS_AS(otfs::MapAxis{}.nearest_bin(0.0), std::out_of_range);
}

TEST_CASE("map export formats", "[map]") {
  otfs::DelayDopplerMap m;
  m.values = otfs::RMatrix(2, 2);
  m.values(0, 0) = 1.0;
  m.values(0, 1) = 0.5;
  m.values(1, 0) = 0.25;
  m.values(1, 1) = 3.0;
  std::ostringstream csv;
  otfs::write_map_csv(csv, m);
  CHECK(csv.str() == "delay_bin,doppler_bin,value\n0,0,1\n0,1,0.5\n1,0,0.25\n1,1,3\n");

  std::stringstream bin;
  otfs::write_map_binary(bin, m);
  CHECK(otfs::io::read_binary_real(bin) == m.values);
}

TEST_CASE("profiles slice one row or column", "[map]") {
  const auto p = otfs::preset_params("isi-regime");
  otfs::DelayDopplerMap m;
  m.values = otfs::RMatrix(4, 8);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 8; ++j) m.values(i, j) = double(10 * i + j);
  m.delay = {.origin = 0.0, .step = p.delay_step(), .size = 4, .periodic = false};
  m.doppler = {.origin = -4 * p.doppler_step(), .step = p.doppler_step(), .size = 8, .periodic = true};

  const auto rp = otfs::range_profile(m, p.doppler_to_velocity(p.doppler_step()), p);
  REQUIRE(rp.size() == 4);
  CHECK(rp[2].value == 25.0);
  CHECK_THAT(rp[2].axis_value, WithinRel(p.delay_to_range(2 * p.delay_step()), 1e-14));

  const auto vp = otfs::velocity_profile(m, p.delay_to_range(3 * p.delay_step()), p);
  REQUIRE(vp.size() == 8);
  CHECK(vp[0].value == 30.0);
  CHECK_THAT(vp[0].axis_value, WithinRel(p.doppler_to_velocity(-4 * p.doppler_step()), 1e-14));
  CHECK_THROWS_AS(otfs::velocity_profile(m, 1e4, p), std::out_of_range);
}

TEST_CASE("parabolic interpolation on log values", "[map]") {
  CHECK(otfs::parabolic_offset(1.0, 2.0, 1.0) == 0.0);
  // Exact for Gaussian-shaped peaks.
  const auto g = [](double x) { return std::exp(-(x - 0.3) * (x - 0.3) / 0.8); };
  CHECK_THAT(otfs::parabolic_offset(g(-1), g(0), g(1)), WithinAbs(0.3, 1e-12));
  CHECK(otfs::parabolic_offset(1.0, 1.0, 1.0) == 0.0);
  CHECK(otfs::parabolic_offset(1.0, 2.0, 3.0) == 0.5);  // vertex beyond the right neighbour: clamped
  CHECK(otfs::parabolic_offset(1.0, 2.0, 100.0) == 0.0);  // convex: no maximum
  CHECK(otfs::parabolic_offset(0.0, 2.0, 1.0) > 0.0);  // leans toward the larger neighbour
  CHECK(otfs::parabolic_offset(1.0, 2.0, 0.0) < 0.0);
}
