#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace reskernel {

struct Seed {
  std::uint64_t base = 0;
  friend bool operator==(const Seed&, const Seed&) = default;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent child seed from a parent and a path of indices.
inline Seed derive_seed(Seed parent, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = parent.base;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t k : path) {
    state = out ^ (k * 0xd1b54a32d192ed03ULL);
    out = splitmix64(state);
  }
  return Seed{out};
}

// xoshiro256** 1.0 (Blackman & Vigna), state filled by splitmix64.
class Xoshiro256 {
 public:
  explicit Xoshiro256(Seed seed) {
    std::uint64_t sm = seed.base;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // +1 or -1 with equal probability.
  double sign() { return (next() >> 63) ? 1.0 : -1.0; }

  // Standard normal via the Box-Muller transform; the second variate of each
  // pair is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace reskernel
