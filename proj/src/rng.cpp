#include "hssmv/rng.hpp"

namespace hssmv {
namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream RngStream::child(StreamLabel label) const {
  RngStream out = *this;
  out.path_.push_back(label);
  return out;
}

std::uint64_t RngStream::key() const {
  std::uint64_t h = mix(seed_);
  for (const auto& label : path_) {
    h = mix(h ^ static_cast<std::uint64_t>(label.level));
    h = mix(h ^ static_cast<std::uint64_t>(label.block));
    h = mix(h ^ static_cast<std::uint64_t>(label.role));
  }
  return h;
}

}  // namespace hssmv
