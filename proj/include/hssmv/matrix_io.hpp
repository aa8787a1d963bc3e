#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hssmv/dense.hpp"

namespace hssmv {

/// "DMAT" | rows u32 | cols u32 | row-major little-endian doubles.
std::vector<std::uint8_t> encode_matrix(const DenseMatrix& a);
DenseMatrix decode_matrix(std::span<const std::uint8_t> bytes);

void write_matrix(const std::string& path, const DenseMatrix& a);
DenseMatrix read_matrix(const std::string& path);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace hssmv
