#pragma once

// Seeded construction of the reservoir coupling W and input coupling w.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "numerics.hpp"
#include "random.hpp"

namespace reskernel {

enum class Regime { random_iid, symmetric_wigner, cycle_permutation };

enum class Distribution { gaussian, uniform, random_signs };

enum class InputKind {
  gaussian,
  uniform,
  ones_random_signs,
  ones_pi_signs,
  ones_e_signs,
  periodic_binary,
  periodic_bipolar,
};

struct ReservoirSpec {
  std::size_t dimension = 100;
  Regime regime = Regime::cycle_permutation;
  Distribution distribution = Distribution::gaussian;  // unused for the cycle
  double target_scale = 0.995;                          // largest singular value nu
};

struct InputCouplingSpec {
  std::size_t dimension = 100;
  InputKind kind = InputKind::ones_pi_signs;
  std::size_t period = 0;  // periodic kinds only
  bool normalize_unit = true;
};

inline bool is_periodic(InputKind k) {
  return k == InputKind::periodic_binary || k == InputKind::periodic_bipolar;
}

// Regime/kind names as used on the command line and in CSV output.
inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::random_iid: return "random";
    case Regime::symmetric_wigner: return "symmetric";
    case Regime::cycle_permutation: return "cycle";
  }
  return "?";
}

inline std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::gaussian: return "gaussian";
    case Distribution::uniform: return "uniform";
    case Distribution::random_signs: return "signs";
  }
  return "?";
}

inline std::string_view to_string(InputKind k) {
  switch (k) {
    case InputKind::gaussian: return "gaussian";
    case InputKind::uniform: return "uniform";
    case InputKind::ones_random_signs: return "ones-random-signs";
    case InputKind::ones_pi_signs: return "pi-signs";
    case InputKind::ones_e_signs: return "e-signs";
    case InputKind::periodic_binary: return "periodic-binary";
    case InputKind::periodic_bipolar: return "periodic-bipolar";
  }
  return "?";
}

enum class IrrationalConstant { pi, e };

// First 256 bits of the fractional binary expansions. Bit 0 is the most
// significant fractional bit (weight 1/2).
inline constexpr std::string_view kPiFractionBits =
    "0010010000111111011010101000100010000101101000110000100011010011"
    "0001001100011001100010100010111000000011011100000111001101000100"
    "1010010000001001001110000010001000101001100111110011000111010000"
    "0000100000101110111110101001100011101100010011100110110010001001";

inline constexpr std::string_view kEFractionBits =
    "1011011111100001010100010110001010001010111011010010101001101010"
    "1011111101110001010110001000000010011100111101001111001111000111"
    "0110001011100111000101100000111100111000101101001101101001010110"
    "1010011110000100110110010000010001010001100100001100111111101111";

inline std::vector<std::uint8_t> irrational_bits(IrrationalConstant c, std::size_t count) {
  const std::string_view table = c == IrrationalConstant::pi ? kPiFractionBits : kEFractionBits;
  detail::require(count >= 1 && count <= table.size(),
                  detail::concat("irrational_bits: count must be in [1, ", table.size(), "]"));
  std::vector<std::uint8_t> bits(count);
  for (std::size_t i = 0; i < count; ++i) bits[i] = table[i] == '1' ? 1 : 0;
  return bits;
}

namespace detail {

inline double draw(Xoshiro256& rng, Distribution d) {
  switch (d) {
    case Distribution::gaussian: return rng.gaussian();
    case Distribution::uniform: return rng.uniform(-1.0, 1.0);
    case Distribution::random_signs: return rng.sign();
  }
  return 0.0;
}

inline void rescale_to_singular_value(Matrix& w, double nu) {
  const double sigma = largest_singular_value(w);
  require(sigma > 0.0, "generate_reservoir: sampled matrix is zero, cannot rescale");
  w *= nu / sigma;
}

}  // namespace detail

// Cyclic permutation 1 -> 2 -> ... -> N -> 1: P(i+1, i) = 1, P(1, N) = 1.
inline Matrix cycle_permutation(std::size_t n) {
  detail::require(n >= 1, "cycle_permutation: dimension must be positive");
  Matrix p(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) p(i + 1, i) = 1.0;
  p(0, n - 1) = 1.0;
  return p;
}

inline Matrix generate_reservoir(const ReservoirSpec& spec, Seed seed) {
  detail::require(spec.dimension >= 1, "generate_reservoir: dimension must be positive");
  detail::require(spec.target_scale > 0.0 && spec.target_scale <= 1.0,
                  "generate_reservoir: target scale nu must lie in (0, 1]");
  const std::size_t n = spec.dimension;
  switch (spec.regime) {
    case Regime::cycle_permutation:
      return spec.target_scale * cycle_permutation(n);
    case Regime::random_iid: {
      Xoshiro256 rng(seed);
      Matrix w(n, n);
      for (auto& x : w.data()) x = detail::draw(rng, spec.distribution);
      detail::rescale_to_singular_value(w, spec.target_scale);
      return w;
    }
    case Regime::symmetric_wigner: {
      Xoshiro256 rng(seed);
      Matrix w(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) w(i, j) = w(j, i) = detail::draw(rng, spec.distribution);
      detail::rescale_to_singular_value(w, spec.target_scale);
      return w;
    }
  }
  throw contract_violation("generate_reservoir: unknown regime");
}

inline Vector generate_input(const InputCouplingSpec& spec, Seed seed) {
  const std::size_t n = spec.dimension;
  detail::require(n >= 1, "generate_input: dimension must be positive");
  Vector w(n);
  Xoshiro256 rng(seed);

  auto signs_from = [&](IrrationalConstant c) {
    const auto bits = irrational_bits(c, n);
    for (std::size_t i = 0; i < n; ++i) w[i] = bits[i] ? 1.0 : -1.0;
  };

  switch (spec.kind) {
    case InputKind::gaussian:
      for (auto& x : w) x = rng.gaussian();
      break;
    case InputKind::uniform:
      for (auto& x : w) x = rng.uniform(-1.0, 1.0);
      break;
    case InputKind::ones_random_signs:
      for (auto& x : w) x = rng.sign();
      break;
    case InputKind::ones_pi_signs:
      signs_from(IrrationalConstant::pi);
      break;
    case InputKind::ones_e_signs:
      signs_from(IrrationalConstant::e);
      break;
    case InputKind::periodic_binary:
    case InputKind::periodic_bipolar: {
      const std::size_t p = spec.period;
      detail::require(p >= 1 && n % p == 0,
                      detail::concat("generate_input: period ", p, " does not divide N=", n));
      const bool binary = spec.kind == InputKind::periodic_binary;
      for (std::size_t i = 0; i < n; ++i) w[i] = (i % p == 0) ? 1.0 : (binary ? 0.0 : -1.0);
      break;
    }
  }

  if (spec.normalize_unit) {
    const double len = norm2(w);
    detail::require(len > 0.0, "generate_input: zero vector cannot be normalized");
    for (auto& x : w) x /= len;
  }
  return w;
}

// The repeating block s of a periodic input kind (before normalization).
inline Vector periodic_block(InputKind kind, std::size_t p) {
  detail::require(is_periodic(kind), "periodic_block: kind is not periodic");
  detail::require(p >= 1, "periodic_block: period must be positive");
  Vector s(p, kind == InputKind::periodic_binary ? 0.0 : -1.0);
  s[0] = 1.0;
  return s;
}

}  // namespace reskernel
