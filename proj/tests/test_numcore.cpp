#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "schurdil/numcore.hpp"
#include "support/random.hpp"

using namespace schurdil;
using schurdil::testing::random_matrix;

namespace {

ComplexMatrix diag(std::initializer_list<Complex> values) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (const auto& x : values) v(k++) = x;
  return v.asDiagonal();
}

// Independent oracle: Jacobi SVD, no eigendecomposition involved.
double oracle_schatten(const ComplexMatrix& a, double p) {
  const Eigen::VectorXd s = Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();
  if (std::isinf(p)) return s.maxCoeff();
  return std::pow(s.array().pow(p).sum(), 1.0 / p);
}

}  // namespace

TEST(SchattenNorm, DiagonalValues) {
  const ComplexMatrix a = diag({3.0, 4.0});
  EXPECT_NEAR(schatten_norm(a, 1.0), 7.0, 1e-14);
  EXPECT_NEAR(schatten_norm(a, 2.0), 5.0, 1e-14);
  EXPECT_NEAR(schatten_norm(a, kOperatorNorm), 4.0, 1e-14);
  EXPECT_NEAR(schatten_norm(a, 2.0, TraceMode::Normalized), 5.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(schatten_norm(a, 1.0, TraceMode::Normalized), 3.5, 1e-14);
}

TEST(SchattenNorm, MatchesSvdOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 5);
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.5, kOperatorNorm}) {
      const double expected = oracle_schatten(a, p);
      EXPECT_NEAR(schatten_norm(a, p), expected, 1e-10 * expected) << "p = " << p;
    }
  }
}

TEST(SchattenNorm, RejectsBadInput) {
  EXPECT_THROW(schatten_norm(ComplexMatrix::Ones(2, 3), 2.0), DimensionError);
  EXPECT_THROW(schatten_norm(identity(2), 0.5), DomainError);
  EXPECT_THROW(schatten_norm(identity(2), std::nan("")), DomainError);
  ComplexMatrix bad = identity(2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(schatten_norm(bad, 2.0), DomainError);
}

TEST(SchattenNorm, TriangleAndHolder) {
  std::mt19937_64 rng(12);
  const std::pair<double, double> pairs[] = {{1.5, 3.0}, {2.0, 2.0}, {4.0, 4.0 / 3.0}};
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix x = random_matrix(rng, 4);
    const ComplexMatrix y = random_matrix(rng, 4);
    for (const auto& [p, q] : pairs) {
      EXPECT_LE(schatten_norm(x + y, p), schatten_norm(x, p) + schatten_norm(y, p) + 1e-9);
      EXPECT_LE(std::abs((x * y).trace()), schatten_norm(x, p) * schatten_norm(y, q) + 1e-9);
    }
  }
}

TEST(PolarDecompose, Identity) {
  const PolarData pd = polar_decompose(identity(3));
  EXPECT_LE((pd.u - identity(3)).norm(), 1e-15);
  EXPECT_LE((pd.absx - identity(3)).norm(), 1e-15);
}

TEST(PolarDecompose, SingularDiagonal) {
  const PolarData pd = polar_decompose(diag({0.0, -2.0}));
  EXPECT_LE((pd.u - diag({0.0, -1.0})).norm(), 1e-15);
  EXPECT_LE((pd.absx - diag({0.0, 2.0})).norm(), 1e-15);
}

TEST(PolarDecompose, ReconstructsRandomInputs) {
  std::mt19937_64 rng(13);
  for (Eigen::Index n = 1; n <= 16; ++n) {
    const ComplexMatrix a = random_matrix(rng, n);
    const PolarData pd = polar_decompose(a);
    EXPECT_LE((pd.u * pd.absx - a).norm(), 1e-10) << "n = " << n;
    EXPECT_LE(hermitian_defect(pd.absx), 1e-12);
    EXPECT_GE(hermitian_eigen(pd.absx).values.minCoeff(), -1e-10);
    EXPECT_LE((pd.u.adjoint() * pd.u - support_projection(pd.absx)).norm(), 1e-10);
  }
}

TEST(PolarDecompose, RankDeficientSupport) {
  std::mt19937_64 rng(14);
  const ComplexMatrix a = random_matrix(rng, 5, 2) * random_matrix(rng, 2, 5);
  const PolarData pd = polar_decompose(a);
  EXPECT_LE((pd.u * pd.absx - a).norm(), 1e-10);
  // u is a partial isometry onto a rank-2 support
  const ComplexMatrix proj = pd.u.adjoint() * pd.u;
  EXPECT_NEAR(proj.trace().real(), 2.0, 1e-8);
  EXPECT_LE((proj * proj - proj).norm(), 1e-8);
}

TEST(UnitaryPolarFactor, UnitaryAndClosest) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 6);
    const ComplexMatrix u = unitary_polar_factor(a);
    EXPECT_LE(unitarity_defect(u), 1e-12);
    // a = u |a| with |a| Hermitian PSD
    const ComplexMatrix abs_a = u.adjoint() * a;
    EXPECT_LE(hermitian_defect(abs_a), 1e-10);
    EXPECT_GE(hermitian_eigen(abs_a).values.minCoeff(), -1e-10);
  }
  // singular input still yields a unitary
  const ComplexMatrix u = unitary_polar_factor(diag({0.0, -2.0, 0.0}));
  EXPECT_LE(unitarity_defect(u), 1e-12);
  EXPECT_NEAR(std::abs(u(1, 1) + 1.0), 0.0, 1e-14);
}

TEST(TensorProduct, Basics) {
  EXPECT_LE((tensor_product(identity(2), identity(3)) - identity(6)).norm(), 0.0);

  ComplexMatrix e11 = ComplexMatrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  ComplexMatrix e22 = ComplexMatrix::Zero(2, 2);
  e22(1, 1) = 1.0;
  const ComplexMatrix t = tensor_product(e11, e22);
  ASSERT_EQ(t.rows(), 4);
  EXPECT_EQ(t(1, 1), Complex(1.0, 0.0));
  EXPECT_EQ(t.cwiseAbs().sum(), 1.0);
}

TEST(TensorProduct, MixedProductProperty) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 2), b = random_matrix(rng, 2);
    const ComplexMatrix c = random_matrix(rng, 2), d = random_matrix(rng, 2);
    const ComplexMatrix lhs = tensor_product(a, b) * tensor_product(c, d);
    EXPECT_LE((lhs - tensor_product(a * c, b * d)).norm(), 1e-12);
  }
}

TEST(TensorProduct, DimensionCap) {
  EXPECT_THROW(tensor_product(identity(100), identity(100), 4096), DimensionError);
  const ComplexMatrix factors[] = {identity(2), identity(3), identity(2)};
  EXPECT_EQ(tensor_product(factors).rows(), 12);
}

TEST(PartialTrace, ElementaryTensor) {
  std::mt19937_64 rng(17);
  const ComplexMatrix a = random_matrix(rng, 2);
  const ComplexMatrix b = random_matrix(rng, 3);
  const std::size_t dims[] = {2, 3};
  const ComplexMatrix y = tensor_product(a, b);
  EXPECT_LE((partial_trace_slot(y, dims, 1, TraceMode::Normalized) - a * (b.trace() / 3.0)).norm(),
            1e-13);
  EXPECT_LE((partial_trace_slot(y, dims, 0) - b * a.trace()).norm(), 1e-13);
}

TEST(PartialTrace, IdentityNormalized) {
  const std::size_t dims[] = {2, 3, 2};
  for (std::size_t slot = 0; slot < 3; ++slot) {
    const ComplexMatrix out = partial_trace_slot(identity(12), dims, slot, TraceMode::Normalized);
    EXPECT_LE((out - identity(12 / dims[slot])).norm(), 1e-15);
  }
}

TEST(PartialTrace, SequentialTraceMatchesTotalTrace) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::size_t> dims{2, 3, 2};
    ComplexMatrix y = random_matrix(rng, 12);
    const Complex total = trace(y, TraceMode::Normalized);
    while (!dims.empty()) {
      const std::size_t slot = dims.size() / 2;
      const ComplexMatrix next = partial_trace_slot(y, dims, slot, TraceMode::Normalized);
      // normalized trace is preserved at every step
      EXPECT_LE(std::abs(trace(next, TraceMode::Normalized) - trace(y, TraceMode::Normalized)), 1e-12);
      y = next;
      dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(slot));
    }
    EXPECT_LE(std::abs(y(0, 0) - total), 1e-12);
  }
}

TEST(PartialTrace, Errors) {
  const std::size_t dims[] = {2, 2};
  EXPECT_THROW(partial_trace_slot(identity(5), dims, 0), DimensionError);
  EXPECT_THROW(partial_trace_slot(identity(4), dims, 2), DimensionError);
}

TEST(HermitianFunction, ClampsNegativeRoundoff) {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = -1e-17;
  h(1, 1) = 4.0;
  const ComplexMatrix r = hermitian_function(h, [](double x) { return std::sqrt(x); }, true);
  EXPECT_TRUE(r.allFinite());
  EXPECT_NEAR(r(1, 1).real(), 2.0, 1e-15);
  EXPECT_NEAR(std::abs(r(0, 0)), 0.0, 1e-15);
}
