#include <gtest/gtest.h>

#include <string>

#include <reskernel/coupling.hpp>

#include "oracles.hpp"

using namespace reskernel;

namespace {

std::string as_string(const std::vector<std::uint8_t>& bits) {
  std::string s;
  for (auto b : bits) s += b ? '1' : '0';
  return s;
}

}  // namespace

TEST(IrrationalBits, SmallExamples) {
  EXPECT_EQ(as_string(irrational_bits(IrrationalConstant::pi, 8)), "00100100");
  EXPECT_EQ(as_string(irrational_bits(IrrationalConstant::e, 8)), "10110111");
  EXPECT_EQ(as_string(irrational_bits(IrrationalConstant::pi, 1)), "0");
}

TEST(IrrationalBits, FullTablesMatchBigNumberExpansion) {
  EXPECT_EQ(std::string(kPiFractionBits), oracle::pi_fraction_bits(kPiFractionBits.size()));
  EXPECT_EQ(std::string(kEFractionBits), oracle::e_fraction_bits(kEFractionBits.size()));
}

TEST(IrrationalBits, CountOutOfRange) {
  EXPECT_THROW(irrational_bits(IrrationalConstant::pi, 0), contract_violation);
  EXPECT_THROW(irrational_bits(IrrationalConstant::e, kEFractionBits.size() + 1), contract_violation);
}

TEST(Reservoir, CyclePermutationExample) {
  const Matrix w = generate_reservoir({3, Regime::cycle_permutation, Distribution::gaussian, 0.5}, Seed{});
  EXPECT_EQ(w, (Matrix{{0, 0, 0.5}, {0.5, 0, 0}, {0, 0.5, 0}}));
}

TEST(Reservoir, SingularValueIsRescaledInEveryRegime) {
  for (Regime r : {Regime::random_iid, Regime::symmetric_wigner, Regime::cycle_permutation})
    for (Distribution d : {Distribution::gaussian, Distribution::uniform, Distribution::random_signs})
      for (double nu : {0.3, 0.9, 1.0}) {
        const Matrix w = generate_reservoir({20, r, d, nu}, Seed{17});
        EXPECT_NEAR(largest_singular_value(w), nu, 1e-9) << to_string(r) << ' ' << to_string(d);
      }
}

TEST(Reservoir, SymmetricIsExactlySymmetric) {
  const Matrix w = generate_reservoir({4, Regime::symmetric_wigner, Distribution::gaussian, 0.9}, Seed{3});
  EXPECT_EQ(w, w.transpose());
}

TEST(Reservoir, DeterministicPerSeed) {
  const ReservoirSpec spec{15, Regime::random_iid, Distribution::gaussian, 0.9};
  EXPECT_EQ(generate_reservoir(spec, Seed{5}), generate_reservoir(spec, Seed{5}));
  EXPECT_NE(generate_reservoir(spec, Seed{5}), generate_reservoir(spec, Seed{6}));
}

TEST(Reservoir, InvalidScale) {
  for (double nu : {0.0, -0.5, 1.01})
    EXPECT_THROW(generate_reservoir({4, Regime::random_iid, Distribution::gaussian, nu}, Seed{}),
                 contract_violation);
  EXPECT_THROW(generate_reservoir({0, Regime::cycle_permutation, Distribution::gaussian, 0.5}, Seed{}),
               contract_violation);
}

TEST(InputCoupling, PeriodicPatternsBeforeNormalization) {
  EXPECT_EQ(generate_input({6, InputKind::periodic_binary, 3, false}, Seed{}), (Vector{1, 0, 0, 1, 0, 0}));
  EXPECT_EQ(generate_input({8, InputKind::periodic_bipolar, 4, false}, Seed{}),
            (Vector{1, -1, -1, -1, 1, -1, -1, -1}));
  EXPECT_EQ(periodic_block(InputKind::periodic_bipolar, 3), (Vector{1, -1, -1}));
}

TEST(InputCoupling, PeriodMustDivideDimension) {
  EXPECT_THROW(generate_input({10, InputKind::periodic_binary, 3, true}, Seed{}), contract_violation);
  EXPECT_THROW(generate_input({10, InputKind::periodic_binary, 0, true}, Seed{}), contract_violation);
}

TEST(InputCoupling, PiSignsFollowBinaryExpansion) {
  const Vector w = generate_input({16, InputKind::ones_pi_signs, 0, false}, Seed{});
  const std::string bits = "0010010000111111";
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(w[i], bits[i] == '1' ? 1.0 : -1.0);
}

TEST(InputCoupling, NormalizationAndDeterminism) {
  for (InputKind k : {InputKind::gaussian, InputKind::uniform, InputKind::ones_random_signs,
                      InputKind::ones_pi_signs, InputKind::ones_e_signs}) {
    const Vector w = generate_input({30, k, 0, true}, Seed{9});
    EXPECT_NEAR(norm2(w), 1.0, 1e-14) << to_string(k);
    EXPECT_EQ(w, generate_input({30, k, 0, true}, Seed{9}));
  }
  const Vector signs = generate_input({50, InputKind::ones_random_signs, 0, false}, Seed{2});
  for (double x : signs) EXPECT_EQ(std::abs(x), 1.0);
}

TEST(Names, RoundTripStrings) {
  EXPECT_EQ(to_string(InputKind::ones_pi_signs), "pi-signs");
  EXPECT_EQ(to_string(Regime::symmetric_wigner), "symmetric");
  EXPECT_EQ(to_string(Distribution::random_signs), "signs");
}
