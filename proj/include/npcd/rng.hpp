#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace npcd {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives independent, named, indexed sub-streams from one master seed.
///
/// stream(name, i) depends only on (master, name, i), so Monte-Carlo work can
/// be split across threads in any order and still reproduce bit-for-bit.
class StreamFactory {
 public:
  explicit StreamFactory(std::uint64_t master) : master_(master) {}

  std::uint64_t master() const { return master_; }

  std::uint64_t seed_for(std::string_view name, std::uint64_t index = 0) const {
    return splitmix64(splitmix64(master_ ^ fnv1a64(name)) + splitmix64(index + 1));
  }

  Rng stream(std::string_view name, std::uint64_t index = 0) const {
    return Rng(seed_for(name, index));
  }

  StreamFactory child(std::string_view name, std::uint64_t index = 0) const {
    return StreamFactory(seed_for(name, index));
  }

 private:
  std::uint64_t master_;
};

}  // namespace npcd
