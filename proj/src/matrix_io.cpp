#include "hssmv/matrix_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "hssmv/error.hpp"

namespace hssmv {

static_assert(std::endian::native == std::endian::little,
              "matrix I/O assumes a little-endian host");

std::vector<std::uint8_t> encode_matrix(const DenseMatrix& a) {
  if (a.rows() > std::numeric_limits<std::uint32_t>::max() ||
      a.cols() > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorKind::invalid_argument, "matrix too large for DMAT");
  }
  std::vector<std::uint8_t> out(12 + sizeof(double) * static_cast<std::size_t>(a.size()));
  std::memcpy(out.data(), "DMAT", 4);
  const auto rows = static_cast<std::uint32_t>(a.rows());
  const auto cols = static_cast<std::uint32_t>(a.cols());
  std::memcpy(out.data() + 4, &rows, 4);
  std::memcpy(out.data() + 8, &cols, 4);
  if (a.size() > 0) std::memcpy(out.data() + 12, a.data(), sizeof(double) * static_cast<std::size_t>(a.size()));
  return out;
}

DenseMatrix decode_matrix(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) fail(ErrorKind::truncated, "DMAT header");
  if (std::memcmp(bytes.data(), "DMAT", 4) != 0) fail(ErrorKind::bad_magic, "expected \"DMAT\"");
  std::uint32_t rows, cols;
  std::memcpy(&rows, bytes.data() + 4, 4);
  std::memcpy(&cols, bytes.data() + 8, 4);
  const std::size_t need = 12 + sizeof(double) * std::size_t{rows} * cols;
  if (bytes.size() < need) fail(ErrorKind::truncated, "DMAT payload");
  if (bytes.size() > need) fail(ErrorKind::trailing_bytes, "DMAT payload");
  DenseMatrix a(rows, cols);
  if (a.size() > 0) std::memcpy(a.data(), bytes.data() + 12, need - 12);
  return a;
}

void write_matrix(const std::string& path, const DenseMatrix& a) { write_file(path, encode_matrix(a)); }

DenseMatrix read_matrix(const std::string& path) { return decode_matrix(read_file(path)); }

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io_error, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io_error, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::io_error, "write failed for " + path);
}

}  // namespace hssmv
