#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <reskernel/coupling.hpp>
#include <reskernel/numerics.hpp>
#include <reskernel/random.hpp>

#include "oracles.hpp"

using namespace reskernel;

namespace {

Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
  Xoshiro256 rng(Seed{seed});
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rng.gaussian();
  return a;
}

}  // namespace

TEST(SymEig, DiagonalMatrix) {
  const auto eig = sym_eig(Matrix{{2, 0}, {0, 1}});
  EXPECT_EQ(eig.values, (Vector{2, 1}));
  EXPECT_EQ(eig.vectors.column(0), (Vector{1, 0}));
  EXPECT_EQ(eig.vectors.column(1), (Vector{0, 1}));
}

TEST(SymEig, SwapMatrixWithSignConvention) {
  const auto eig = sym_eig(Matrix{{0, 1}, {1, 0}});
  EXPECT_NEAR(eig.values[0], 1.0, 1e-15);
  EXPECT_NEAR(eig.values[1], -1.0, 1e-15);
  const double s = std::numbers::sqrt2 / 2;
  // Largest-magnitude entries tie; the first one is made positive.
  EXPECT_NEAR(eig.vectors(0, 0), s, 1e-15);
  EXPECT_NEAR(eig.vectors(1, 0), s, 1e-15);
  EXPECT_NEAR(eig.vectors(0, 1), s, 1e-15);
  EXPECT_NEAR(eig.vectors(1, 1), -s, 1e-15);
}

TEST(SymEig, MatchesQrIterationOracle) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Matrix a = random_symmetric(8, seed);
    const auto eig = sym_eig(a);
    const auto ref = oracle::qr_eigen(a);
    for (std::size_t k = 0; k < 8; ++k) {
      EXPECT_NEAR(eig.values[k], ref.values[k], 1e-8) << "seed " << seed << " k " << k;
      const double align = std::abs(dot(eig.vectors.column(k), ref.vectors[k]));
      EXPECT_NEAR(align, 1.0, 1e-8);
    }
  }
}

TEST(SymEig, ReconstructsAndIsOrthonormal) {
  const Matrix a = random_symmetric(12, 99);
  const auto eig = sym_eig(a);
  const Matrix lambda = Matrix::diagonal(eig.values);
  const Matrix back = eig.vectors * lambda * eig.vectors.transpose();
  EXPECT_LT(max_abs(back - a), 1e-12 * max_abs(a) * 12);
  const Matrix gram = eig.vectors.transpose() * eig.vectors;
  EXPECT_LT(max_abs(gram - Matrix::identity(12)), 1e-13);
  for (std::size_t k = 1; k < 12; ++k) EXPECT_GE(eig.values[k - 1], eig.values[k]);
}

TEST(SymEig, OrientationMakesLargestEntryPositive) {
  const auto eig = sym_eig(random_symmetric(10, 5));
  for (std::size_t k = 0; k < 10; ++k) {
    const Vector v = eig.vectors.column(k);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[arg]) * (1 + 1e-12)) arg = i;
    EXPECT_GT(v[arg], 0.0);
  }
}

TEST(SymEig, RejectsAsymmetricAndNonFinite) {
  EXPECT_THROW(sym_eig(Matrix{{1, 2}, {0, 1}}), contract_violation);
  EXPECT_THROW(sym_eig(Matrix{{1, NAN}, {NAN, 1}}), contract_violation);
  EXPECT_THROW(sym_eig(Matrix(2, 3)), contract_violation);
}

TEST(SymEig, SweepLimitRaisesConvergenceError) {
  JacobiOptions opt;
  opt.max_sweeps = 1;
  EXPECT_THROW(sym_eig(random_symmetric(20, 3), opt), convergence_error);
}

TEST(SymEig, EmptyAndScalar) {
  const auto one = sym_eig(Matrix{{-3}});
  EXPECT_EQ(one.values, Vector{-3});
  EXPECT_EQ(one.vectors(0, 0), 1.0);
}

TEST(SingularValue, DiagonalAndPermutation) {
  EXPECT_NEAR(largest_singular_value(Matrix{{3, 0}, {0, -4}}), 4.0, 1e-12);
  for (std::size_t n : {1u, 2u, 5u, 17u}) EXPECT_NEAR(largest_singular_value(cycle_permutation(n)), 1.0, 1e-12);
}

TEST(SingularValue, MatchesOracleOnGramMatrix) {
  Xoshiro256 rng(Seed{11});
  Matrix a(10, 10);
  for (auto& x : a.data()) x = rng.gaussian();
  const auto ref = oracle::qr_eigen(a.transpose() * a);
  EXPECT_NEAR(largest_singular_value(a), std::sqrt(ref.values.front()), 1e-9);
}

TEST(Dft, DeltaConstantAndShiftedDelta) {
  const auto d = dft(Vector{1, 0, 0, 0});
  for (const auto& z : d) EXPECT_EQ(z, Complex(1, 0));
  const auto c = dft(Vector{1, 1, 1, 1});
  EXPECT_EQ(c[0], Complex(4, 0));
  for (std::size_t k = 1; k < 4; ++k) EXPECT_NEAR(std::abs(c[k]), 0.0, 1e-15);
  const auto s = dft(Vector{0, 1, 0, 0});
  EXPECT_EQ(s[0], Complex(1, 0));
  EXPECT_EQ(s[1], Complex(0, -1));
  EXPECT_EQ(s[2], Complex(-1, 0));
  EXPECT_EQ(s[3], Complex(0, 1));
}

TEST(Dft, InverseRecoversSignalAndParseval) {
  Xoshiro256 rng(Seed{4});
  Vector v(37);
  for (auto& x : v) x = rng.gaussian();
  const auto z = dft(v);
  const auto back = oracle::inverse_dft(z);
  double energy = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(back[i].real(), v[i], 1e-12);
    EXPECT_NEAR(back[i].imag(), 0.0, 1e-12);
  }
  for (const auto& c : z) energy += std::norm(c);
  EXPECT_NEAR(energy / 37.0, dot(v, v), 1e-10);
}

TEST(NumericalRank, Examples) {
  EXPECT_EQ(numerical_rank(Vector{4, 1, 1e-14}, 1e-10), 2u);
  EXPECT_EQ(numerical_rank(Vector{0, 0, 0}, 1e-10), 0u);
  EXPECT_THROW(numerical_rank(Vector{1, 2}, 1e-10), contract_violation);
  EXPECT_THROW(numerical_rank(Vector{1, -0.5}, 1e-10), contract_violation);
}

TEST(Random, DeterministicStreamsAndDerivedSeeds) {
  Xoshiro256 a(Seed{42}), b(Seed{42});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(derive_seed(Seed{1}, {0, 1}).base, derive_seed(Seed{1}, {1, 0}).base);
  EXPECT_EQ(derive_seed(Seed{1}, {3}).base, derive_seed(Seed{1}, {3}).base);
}

TEST(Random, GaussianMoments) {
  Xoshiro256 rng(Seed{8});
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    s += g;
    s2 += g * g;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}
