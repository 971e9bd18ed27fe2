#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "schurdil/schur.hpp"
#include "schurdil/witness.hpp"
#include "support/random.hpp"

using namespace schurdil;
using namespace schurdil::testing;

namespace {

// Hermitian, unit diagonal; off-diagonal moduli up to `spread`, so both PSD
// and indefinite symbols occur.
ComplexMatrix random_unit_diagonal(std::mt19937_64& rng, Eigen::Index n, double spread) {
  std::uniform_real_distribution<double> mod(0.0, spread);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      m(i, j) = std::polar(mod(rng), phase(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

}  // namespace

TEST(ValidateSymbol, AllOnes) {
  const SchurSymbol s = SchurSymbol::all_ones(3);
  const ValidityReport r = validate_symbol(s);
  EXPECT_TRUE(r.hermitian);
  EXPECT_TRUE(r.psd);
  EXPECT_TRUE(r.unit_diagonal);
  EXPECT_NEAR(r.min_eigenvalue, 0.0, 1e-14);
  const RealVector eig = hermitian_eigen(s.matrix()).values;
  EXPECT_NEAR(eig(2), 3.0, 1e-14);
}

TEST(ValidateSymbol, IndefiniteTwoByTwo) {
  ComplexMatrix m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;
  const ValidityReport r = validate_symbol(SchurSymbol(m));
  // characteristic polynomial (1 - t)^2 - 4 has roots 3 and -1
  EXPECT_FALSE(r.psd);
  EXPECT_NEAR(r.min_eigenvalue, -1.0, 1e-14);
  EXPECT_TRUE(r.hermitian);
  EXPECT_TRUE(r.unit_diagonal);
  EXPECT_THROW(require_valid_symbol(SchurSymbol(m)), InvalidSymbolError);
}

TEST(ValidateSymbol, GramOfUnitariesIsValid) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const ValidityReport r = validate_symbol(SchurSymbol(gram_of(random_witness(rng, 4, 3))));
    EXPECT_TRUE(r.valid());
  }
}

TEST(ValidateSymbol, NonHermitianAndBadDiagonal) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = 0.5;
  const SchurSymbol s(m);
  EXPECT_FALSE(s.report().hermitian);
  EXPECT_FALSE(s.report().psd);
  EXPECT_THROW(require_valid_symbol(s), InvalidSymbolError);
  // Hadamard products are still defined
  EXPECT_EQ(apply_multiplier(s, ComplexMatrix::Ones(2, 2)), m);

  ComplexMatrix d = ComplexMatrix::Identity(2, 2) * 2.0;
  EXPECT_FALSE(SchurSymbol(d).report().unit_diagonal);
}

TEST(ApplyMultiplier, Definitions) {
  std::mt19937_64 rng(22);
  const ComplexMatrix a = random_matrix(rng, 3);
  EXPECT_EQ(apply_multiplier(SchurSymbol::all_ones(3), a), a);

  ComplexMatrix b(2, 2);
  b << 1.0, 2.0, 3.0, 4.0;
  ComplexMatrix expected(2, 2);
  expected << 1.0, 0.0, 0.0, 4.0;
  EXPECT_EQ(apply_multiplier(SchurSymbol::identity(2), b), expected);

  EXPECT_THROW(apply_multiplier(SchurSymbol::identity(2), a), DimensionError);
}

TEST(ApplyMultiplier, ContractiveOnSchattenClasses) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const SchurSymbol s(gram_of(random_witness(rng, 4, 2)));
    const ComplexMatrix a = random_matrix(rng, 4);
    for (double p : {1.0, 1.5, 2.0, 3.0, kOperatorNorm}) {
      EXPECT_LE(schatten_norm(apply_multiplier(s, a), p), schatten_norm(a, p) + 1e-10) << p;
    }
  }
}

TEST(ApplyMultiplier, PositivityTransfer) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const SchurSymbol s(gram_of(random_witness(rng, 4, 3)));
    const ComplexMatrix a = random_psd(rng, 4, 1 + trial % 4);
    EXPECT_GE(hermitian_eigen(apply_multiplier(s, a)).values.minCoeff(), -1e-10);
  }
}

TEST(ApplyMultiplier, CompletePositivityByAmplification) {
  std::mt19937_64 rng(25);
  for (std::size_t k = 1; k <= 3; ++k) {
    for (int trial = 0; trial < 10; ++trial) {
      const SchurSymbol s(gram_of(random_witness(rng, 3, 2)));
      const auto dim = static_cast<Eigen::Index>(3 * k);
      const ComplexMatrix a = random_psd(rng, dim, dim);
      const ComplexMatrix out = apply_multiplier_amplified(s, a, k);
      EXPECT_GE(hermitian_eigen(out).values.minCoeff(), -1e-10) << "k = " << k;
    }
  }
  EXPECT_THROW(apply_multiplier_amplified(SchurSymbol::identity(2), identity(5), 2), DimensionError);
}

TEST(ChoiMatrix, TwoByTwoStructure) {
  const Complex c(0.3, -0.4);  // |c| = 0.5
  ComplexMatrix m(2, 2);
  m << 1.0, c, std::conj(c), 1.0;
  const ComplexMatrix choi = choi_matrix(SchurSymbol(m));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(3, 3) = 1.0;
  expected(0, 3) = c;
  expected(3, 0) = std::conj(c);
  EXPECT_EQ(choi, expected);
  const RealVector eig = hermitian_eigen(choi).values;
  EXPECT_NEAR(eig(0), 0.0, 1e-15);
  EXPECT_NEAR(eig(1), 0.0, 1e-15);
  EXPECT_NEAR(eig(2), 0.5, 1e-14);
  EXPECT_NEAR(eig(3), 1.5, 1e-14);
}

TEST(ChoiMatrix, AllOnesIsScaledMaximallyEntangledProjection) {
  const RealVector eig = hermitian_eigen(choi_matrix(SchurSymbol::all_ones(2))).values;
  EXPECT_NEAR(eig(3), 2.0, 1e-14);
  EXPECT_NEAR(eig.head(3).cwiseAbs().maxCoeff(), 0.0, 1e-14);
}

TEST(ChoiMatrix, PositivityMatchesSymbol) {
  std::mt19937_64 rng(26);
  int psd_count = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SchurSymbol s(random_unit_diagonal(rng, 4, 0.8));
    const double choi_min = hermitian_eigen(choi_matrix(s)).values.minCoeff();
    const bool choi_psd = choi_min >= -kDefaultTol;
    EXPECT_EQ(choi_psd, s.report().psd);
    psd_count += s.report().psd;
  }
  // the generator must exercise both outcomes
  EXPECT_GT(psd_count, 5);
  EXPECT_LT(psd_count, 95);
}
