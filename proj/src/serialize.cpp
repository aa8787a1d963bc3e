#include "hssmv/serialize.hpp"

#include <bit>
#include <cstring>
#include <string>

#include "hssmv/error.hpp"
#include "hssmv/matrix_io.hpp"

namespace hssmv {
namespace {

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");

constexpr char kMagic[4] = {'H', 'S', 'S', 'F'};

class Writer {
 public:
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void matrix(const DenseMatrix& m) { raw(m.data(), sizeof(double) * static_cast<std::size_t>(m.size())); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void raw(void* p, std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      fail(ErrorKind::truncated, std::string("container ends inside ") + what);
    }
    std::memcpy(p, bytes_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32(const char* what) {
    std::uint32_t v;
    raw(&v, sizeof v, what);
    return v;
  }
  DenseMatrix matrix(Index rows, Index cols, const char* what) {
    DenseMatrix m(rows, cols);
    raw(m.data(), sizeof(double) * static_cast<std::size_t>(m.size()), what);
    return m;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize(const TelescopingFactorization& t) {
  Writer w;
  w.raw(kMagic, 4);
  w.u32(kContainerVersion);
  w.u32(static_cast<std::uint32_t>(t.levels()));
  w.u32(static_cast<std::uint32_t>(t.rank()));
  for (int l = t.levels(); l >= 1; --l) {
    const auto& f = t.level(l);
    for (const auto& b : f.u.blocks()) w.matrix(b);
    for (const auto& b : f.v.blocks()) w.matrix(b);
    for (const auto& b : f.d.blocks()) w.matrix(b);
  }
  w.matrix(t.root());
  return w.take();
}

TelescopingFactorization deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  char magic[4];
  r.raw(magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) fail(ErrorKind::bad_magic, "expected \"HSSF\"");
  const std::uint32_t version = r.u32("version");
  if (version != kContainerVersion) {
    fail(ErrorKind::version_mismatch, "container version " + std::to_string(version) +
                                          ", supported " + std::to_string(kContainerVersion));
  }
  const std::uint32_t levels = r.u32("header");
  const std::uint32_t rank = r.u32("header");
  if (levels < 1 || levels > 30 || rank < 1 || rank > (1u << 20)) {
    fail(ErrorKind::bad_header,
         "L = " + std::to_string(levels) + ", k = " + std::to_string(rank));
  }
  // Size check before allocating anything.
  const std::size_t k = rank;
  std::size_t doubles = 4 * k * k;
  for (std::uint32_t l = 1; l <= levels; ++l) {
    doubles += (std::size_t{1} << l) * (2 * k * k + 2 * k * k + 4 * k * k);
  }
  if (r.remaining() < doubles * sizeof(double)) {
    fail(ErrorKind::truncated, "payload holds " + std::to_string(r.remaining()) + " bytes, need " +
                                   std::to_string(doubles * sizeof(double)));
  }
  const Index kk = static_cast<Index>(rank);
  std::vector<LevelFactors> top_down;
  for (int l = static_cast<int>(levels); l >= 1; --l) {
    const Index n = Index{1} << l;
    std::vector<DenseMatrix> u, v, d;
    for (Index i = 0; i < n; ++i) u.push_back(r.matrix(2 * kk, kk, "U blocks"));
    for (Index i = 0; i < n; ++i) v.push_back(r.matrix(2 * kk, kk, "V blocks"));
    for (Index i = 0; i < n; ++i) d.push_back(r.matrix(2 * kk, 2 * kk, "D blocks"));
    top_down.push_back(LevelFactors{BlockDiagonalBasis(std::move(u)), BlockDiagonalBasis(std::move(v)),
                                    BlockDiagonalDense(std::move(d))});
  }
  DenseMatrix root = r.matrix(2 * kk, 2 * kk, "root");
  if (r.remaining() != 0) {
    fail(ErrorKind::trailing_bytes, std::to_string(r.remaining()) + " bytes after the root block");
  }
  return TelescopingFactorization(static_cast<int>(levels), kk, std::move(top_down), std::move(root));
}

void write_factorization(const std::string& path, const TelescopingFactorization& t) {
  write_file(path, serialize(t));
}

TelescopingFactorization read_factorization(const std::string& path) {
  return deserialize(read_file(path));
}

}  // namespace hssmv
