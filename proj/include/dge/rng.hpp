#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace dge {

// One splitmix64 mixing step. Used only to derive stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Addressable random stream: a master seed plus a derivation path
// (purpose label + integer indices). Identical (seed, path) gives an
// identical stream no matter where or in what order it is opened, so
// per-direction and per-step draws never depend on evaluation order.
struct RngSpec {
  std::uint64_t master_seed = 0;
  std::string purpose;
  std::vector<std::uint64_t> indices;

  RngSpec with_purpose(std::string_view p) const {
    RngSpec out = *this;
    out.purpose.assign(p);
    return out;
  }

  RngSpec child(std::uint64_t index) const {
    RngSpec out = *this;
    out.indices.push_back(index);
    return out;
  }

  std::uint64_t derived_seed() const noexcept {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ fnv1a64(purpose));
    for (std::uint64_t idx : indices) h = splitmix64(h ^ idx);
    return h;
  }
};

// Scalar stream over mt19937_64. The engine's sequence is pinned by the
// standard; the uniform and gaussian transforms are done here instead of
// with std::*_distribution, whose algorithms are implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}
  explicit RngStream(const RngSpec& spec) : engine_(spec.derived_seed()) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double gaussian();

  // Unbiased draw in [0, n); n >= 1.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dge
