#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hssmv/structures.hpp"

namespace hssmv {

inline constexpr std::uint32_t kContainerVersion = 1;

/// "HSSF" | version u32 | L u32 | k u32 | for l = L..1: U blocks, V blocks,
/// D blocks | D0. Little-endian throughout; block payloads are raw row-major
/// doubles with no per-block headers.
std::vector<std::uint8_t> serialize(const TelescopingFactorization& t);

/// Throws Error with kind bad_magic, version_mismatch, bad_header, truncated,
/// trailing_bytes or invalid_factor.
TelescopingFactorization deserialize(std::span<const std::uint8_t> bytes);

void write_factorization(const std::string& path, const TelescopingFactorization& t);
TelescopingFactorization read_factorization(const std::string& path);

}  // namespace hssmv
