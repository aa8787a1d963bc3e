#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>

#include "hssmv/matrix_io.hpp"
#include "hssmv/serialize.hpp"
#include "test_util.hpp"

namespace hssmv {
namespace {

using testing::kind_of;

void expect_identical(const TelescopingFactorization& a, const TelescopingFactorization& b) {
  ASSERT_EQ(a.levels(), b.levels());
  ASSERT_EQ(a.rank(), b.rank());
  for (int l = 1; l <= a.levels(); ++l) {
    for (Index i = 0; i < a.level(l).u.block_count(); ++i) {
      EXPECT_EQ(a.level(l).u.block(i), b.level(l).u.block(i));
      EXPECT_EQ(a.level(l).v.block(i), b.level(l).v.block(i));
      EXPECT_EQ(a.level(l).d.block(i), b.level(l).d.block(i));
    }
  }
  EXPECT_EQ(a.root(), b.root());
}

TEST(Serialize, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = random_telescoping(1 + static_cast<int>(seed % 4), 1 + static_cast<Index>(seed % 3), seed);
    expect_identical(t, deserialize(serialize(t)));
  }
}

TEST(Serialize, LayoutAndSize) {
  const auto t = random_telescoping(2, 3, 1);
  const auto bytes = serialize(t);
  ASSERT_GE(bytes.size(), 16u);
  EXPECT_EQ(std::memcmp(bytes.data(), "HSSF", 4), 0);
  std::uint32_t header[3];
  std::memcpy(header, bytes.data() + 4, 12);
  EXPECT_EQ(header[0], 1u);
  EXPECT_EQ(header[1], 2u);
  EXPECT_EQ(header[2], 3u);
  // level 2: 4 blocks, level 1: 2 blocks; each block U (6x3), V (6x3), D (6x6); root 6x6
  const std::size_t doubles = 6 * (18 + 18 + 36) + 36;
  EXPECT_EQ(bytes.size(), 16 + 8 * doubles);
  // First payload double is U^(2)_1(0, 0).
  double first;
  std::memcpy(&first, bytes.data() + 16, 8);
  EXPECT_EQ(first, t.level(2).u.block(0)(0, 0));
}

TEST(Serialize, CorruptionIsReportedDistinctly) {
  const auto good = serialize(random_telescoping(2, 2, 5));
  auto bad = good;
  bad[0] ^= 0xff;
  EXPECT_EQ(kind_of([&] { deserialize(bad); }), ErrorKind::bad_magic);
  bad = good;
  bad[4] = 2;
  EXPECT_EQ(kind_of([&] { deserialize(bad); }), ErrorKind::version_mismatch);
  bad = good;
  bad.resize(bad.size() - 1);
  EXPECT_EQ(kind_of([&] { deserialize(bad); }), ErrorKind::truncated);
  bad = good;
  bad.resize(10);
  EXPECT_EQ(kind_of([&] { deserialize(bad); }), ErrorKind::truncated);
  bad = good;
  bad.push_back(0);
  EXPECT_EQ(kind_of([&] { deserialize(bad); }), ErrorKind::trailing_bytes);
  bad = good;
  std::memset(bad.data() + 8, 0, 4);
  EXPECT_EQ(kind_of([&] { deserialize(bad); }), ErrorKind::bad_header);
  bad = good;
  const double junk = 5.0;
  std::memcpy(bad.data() + 16, &junk, 8);
  EXPECT_EQ(kind_of([&] { deserialize(bad); }), ErrorKind::invalid_factor);
  EXPECT_EQ(kind_of([&] { deserialize(std::vector<std::uint8_t>{}); }), ErrorKind::truncated);
}

TEST(Serialize, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string path = (dir / "hssmv_serialize_test.hssf").string();
  const auto t = random_telescoping(3, 2, 8);
  write_factorization(path, t);
  expect_identical(t, read_factorization(path));
  std::filesystem::remove(path);
  EXPECT_EQ(kind_of([&] { read_factorization(path); }), ErrorKind::io_error);
}

TEST(MatrixIo, RoundTripAndErrors) {
  const DenseMatrix a = testing::randn(5, 3, 2);
  const auto bytes = encode_matrix(a);
  EXPECT_EQ(bytes.size(), 12u + 15 * 8);
  EXPECT_EQ(decode_matrix(bytes), a);
  auto bad = bytes;
  bad[1] = 'X';
  EXPECT_EQ(kind_of([&] { decode_matrix(bad); }), ErrorKind::bad_magic);
  bad = bytes;
  bad.pop_back();
  EXPECT_EQ(kind_of([&] { decode_matrix(bad); }), ErrorKind::truncated);
  bad = bytes;
  bad.push_back(1);
  EXPECT_EQ(kind_of([&] { decode_matrix(bad); }), ErrorKind::trailing_bytes);
}

}  // namespace
}  // namespace hssmv
