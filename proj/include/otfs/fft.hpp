// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "otfs/types.hpp"

// Thin FFTW front end. Plans are cached per (length, direction) and executed
// through the new-array interface, so concurrent calls are safe.
namespace otfs::fft {

enum class Direction { forward, inverse };

/// Unnormalized in-place transform: forward uses e^{-j2pi kn/L}, inverse e^{+j2pi kn/L}.
void transform(std::span<cplx> data, Direction dir);

/// Unitary DFT / IDFT (scaled by 1/sqrt(L)).
void dft_unitary(std::span<cplx> data);
void idft_unitary(std::span<cplx> data);

CVector dft(std::span<const cplx> x);
CVector idft(std::span<const cplx> x);

}  // namespace otfs::fft
