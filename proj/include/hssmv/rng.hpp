#pragma once

#include <cstdint>
#include <vector>

namespace hssmv {

/// What a derived stream is used for. Values are part of the stream key, so
/// never renumber them.
enum class StreamRole : std::uint32_t {
  omega = 1,
  omega_tilde = 2,
  psi = 3,
  psi_tilde = 4,
  factor_u = 10,
  factor_v = 11,
  factor_d = 12,
  factor_x = 13,
  root = 14,
  matrix = 20,
  noise = 21,
  trial = 30,
  test = 100,
};

struct StreamLabel {
  std::int64_t level = 0;
  std::int64_t block = 0;
  StreamRole role = StreamRole::test;
};

/// Splittable seed: a root seed plus the path of labels that identifies a
/// substream. Deriving a child never touches the parent, and identical
/// (seed, path) pairs always reproduce the same samples regardless of the
/// order or thread in which streams are drawn.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed) {}

  RngStream child(StreamLabel label) const;
  RngStream child(std::int64_t level, std::int64_t block, StreamRole role) const {
    return child(StreamLabel{level, block, role});
  }

  std::uint64_t seed() const { return seed_; }
  const std::vector<StreamLabel>& path() const { return path_; }

  /// 64-bit key mixing the seed and every label of the path.
  std::uint64_t key() const;

 private:
  std::uint64_t seed_;
  std::vector<StreamLabel> path_;
};

}  // namespace hssmv
