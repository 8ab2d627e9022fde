// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

#include "otfs/types.hpp"

// Matrix fixtures.
//
// CSV: one line per row, each complex entry written as two columns "re,im"
// (so a row of M entries has 2M fields). Values use 17 significant digits,
// which round-trips doubles exactly.
//
// Binary: 8-byte magic "OTFSMAT\0", uint8 kind (1 = complex, 0 = real),
// 7 bytes padding, uint64 rows, uint64 cols, then row-major little-endian
// IEEE-754 doubles (re, im interleaved for complex).
namespace otfs::io {

void write_csv(std::ostream& out, const CMatrix& m);
CMatrix read_csv(std::istream& in);

void write_binary(std::ostream& out, const CMatrix& m);
void write_binary(std::ostream& out, const RMatrix& m);
CMatrix read_binary_complex(std::istream& in);
RMatrix read_binary_real(std::istream& in);

}  // namespace otfs::io
