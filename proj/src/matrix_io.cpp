// SPDX-License-Identifier: Apache-2.0
#include "otfs/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

static_assert(std::endian::native == std::endian::little, "binary fixtures assume a little-endian host");

namespace otfs::io {
namespace {

constexpr std::array<char, 8> kMagic = {'O', 'T', 'F', 'S', 'M', 'A', 'T', '\0'};

void write_header(std::ostream& out, std::uint8_t kind, std::uint64_t rows, std::uint64_t cols) {
  out.write(kMagic.data(), kMagic.size());
  std::array<char, 8> kind_block{};
  kind_block[0] = static_cast<char>(kind);
  out.write(kind_block.data(), kind_block.size());
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
}

std::pair<std::uint64_t, std::uint64_t> read_header(std::istream& in, std::uint8_t expected_kind) {
  std::array<char, 8> magic{};
  std::array<char, 8> kind_block{};
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  in.read(magic.data(), magic.size());
  in.read(kind_block.data(), kind_block.size());
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in || magic != kMagic) throw std::runtime_error("binary matrix: bad header");
  if (static_cast<std::uint8_t>(kind_block[0]) != expected_kind) {
    throw std::runtime_error("binary matrix: unexpected element kind");
  }
  return {rows, cols};
}

}  // namespace

void write_csv(std::ostream& out, const CMatrix& m) {
  out << std::setprecision(17);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c).real() << ',' << m(r, c).imag();
    }
    out << '\n';
  }
}

CMatrix read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        fields.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw std::runtime_error("matrix csv line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    if (fields.size() % 2 != 0) {
      throw std::runtime_error("matrix csv line " + std::to_string(line_no) + ": odd number of fields");
    }
    if (!rows.empty() && fields.size() != rows.front().size()) {
      throw std::runtime_error("matrix csv line " + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) return {};
  CMatrix m(rows.size(), rows.front().size() / 2);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = {rows[r][2 * c], rows[r][2 * c + 1]};
  }
  return m;
}

void write_binary(std::ostream& out, const CMatrix& m) {
  write_header(out, 1, m.rows(), m.cols());
  out.write(reinterpret_cast<const char*>(m.flat().data()),
            static_cast<std::streamsize>(m.size() * sizeof(cplx)));
}

void write_binary(std::ostream& out, const RMatrix& m) {
  write_header(out, 0, m.rows(), m.cols());
  out.write(reinterpret_cast<const char*>(m.flat().data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
}

CMatrix read_binary_complex(std::istream& in) {
  const auto [rows, cols] = read_header(in, 1);
  CMatrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.flat().data()), static_cast<std::streamsize>(m.size() * sizeof(cplx)));
  if (!in) throw std::runtime_error("binary matrix: truncated payload");
  return m;
}

RMatrix read_binary_real(std::istream& in) {
  const auto [rows, cols] = read_header(in, 0);
  RMatrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.flat().data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!in) throw std::runtime_error("binary matrix: truncated payload");
  return m;
}

}  // namespace otfs::io
