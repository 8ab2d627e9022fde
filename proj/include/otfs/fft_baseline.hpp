// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "otfs/dd_map.hpp"
#include "otfs/modem.hpp"

namespace otfs {

/// Frequency-time cells whose transmit magnitude falls below this are erased
/// instead of divided.
inline constexpr double kDivisionFloor = 1e-6;

/// Conventional OFDM-radar processing of the single-prefix frame:
/// per-symbol N-point DFT, spectral division by the transmit grid, IDFT over
/// subcarriers (range) and DFT over symbols (Doppler), squared magnitude.
///
/// Output is N delay bins (T/N wide, [0, T)) by M Doppler bins (1/(MT) wide,
/// centred on zero); both axes are periodic. Values are divided by
/// noise_variance so the noise floor sits at one, like the GLRT map.
RangeDopplerMap ofdm_2dfft(std::span<const cplx> y, const DelayDopplerFrame& frame, const OtfsParams& params,
                           double noise_variance = 1.0);

}  // namespace otfs
