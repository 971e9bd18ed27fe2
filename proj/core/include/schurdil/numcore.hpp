#pragma once

// Dense complex linear algebra shared by every other module.
//
// The Hermitian eigendecomposition is the single numerical kernel: singular
// values, polar factors and matrix functions are all derived from it.

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "schurdil/error.hpp"

namespace schurdil {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Default absolute (Frobenius) tolerance used across the library.
inline constexpr double kDefaultTol = 1e-10;

/// Pass as `p` to schatten_norm for the operator norm.
inline constexpr double kOperatorNorm = std::numeric_limits<double>::infinity();

/// Largest side length tensor_product will produce.
inline constexpr std::size_t kMaxTensorDim = 8192;

enum class TraceMode { Standard, Normalized };

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are eigenvectors
};

/// Polar decomposition x = u |x|.  u is a partial isometry with u*u = s(|x|).
struct PolarData {
  ComplexMatrix u;
  ComplexMatrix absx;
};

ComplexMatrix identity(std::size_t n);

/// Throws DomainError if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& a, const char* what);
void require_square(const ComplexMatrix& a, const char* what);

Complex trace(const ComplexMatrix& a, TraceMode mode = TraceMode::Standard);

/// max_ij |a_ij - conj(a_ji)|
double hermitian_defect(const ComplexMatrix& a);

/// ||a* a - I||_F
double unitarity_defect(const ComplexMatrix& a);

/// Eigendecomposition of the Hermitian part (a + a*)/2.
HermitianEigen hermitian_eigen(const ComplexMatrix& a);

/// Eigenvalues below this are treated as zero when forming supports.
double support_threshold(const RealVector& eigenvalues);

/// f(h) by functional calculus on the Hermitian part of h.  Eigenvalues are
/// clamped at 0 first when `clamp_nonnegative` is set.
template <typename F>
ComplexMatrix hermitian_function(const ComplexMatrix& h, F&& f,
                                 bool clamp_nonnegative = false) {
  const HermitianEigen eig = hermitian_eigen(h);
  RealVector mapped(eig.values.size());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    double lambda = eig.values(k);
    if (clamp_nonnegative && lambda < 0.0) lambda = 0.0;
    mapped(k) = f(lambda);
  }
  return eig.vectors * mapped.cast<Complex>().asDiagonal() *
         eig.vectors.adjoint();
}

/// Projection onto the span of eigenvectors of a PSD h above support_threshold.
ComplexMatrix support_projection(const ComplexMatrix& h);

/// Singular values in descending order, from the eigenvalues of a* a.
RealVector singular_values(const ComplexMatrix& a);

/// (sum_k s_k^p)^{1/p}, divided by n^{1/p} in normalized mode; operator norm
/// for p = kOperatorNorm.
double schatten_norm(const ComplexMatrix& a, double p,
                     TraceMode mode = TraceMode::Standard);

PolarData polar_decompose(const ComplexMatrix& a);

/// Nearest unitary to a (the unitary factor W V* of an SVD a = W S V*),
/// completing the partial isometry on the kernel when a is singular.
ComplexMatrix unitary_polar_factor(const ComplexMatrix& a);

/// Left-major Kronecker product: (a (x) b)(i*rb + k, j*cb + l) = a(i,j) b(k,l).
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             std::size_t max_dim = kMaxTensorDim);
ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors,
                             std::size_t max_dim = kMaxTensorDim);

/// Traces out tensor factor `slot` of y, where y acts on the left-major
/// product of spaces with the given dims.
ComplexMatrix partial_trace_slot(const ComplexMatrix& y,
                                 std::span<const std::size_t> dims,
                                 std::size_t slot,
                                 TraceMode mode = TraceMode::Standard);

}  // namespace schurdil
