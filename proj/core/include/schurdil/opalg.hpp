#pragma once

// Numerical counterparts of the operator-algebra facts used to identify
// factorizable multipliers: matrix-unit systems and the isomorphism they
// induce, conjugacy of matrix-unit systems, Schatten-class norming
// functionals, and injectivity of z -> x z x on the support corner.

#include <cstddef>
#include <vector>

#include "schurdil/numcore.hpp"

namespace schurdil {

/// Family {w_ij} of N x N matrices, stored row-major (w[i * n + j]).
struct MatrixUnitSystem {
  std::size_t n = 0;
  std::size_t ambient_dim = 0;
  std::vector<ComplexMatrix> w;

  const ComplexMatrix& operator()(std::size_t i, std::size_t j) const { return w[i * n + j]; }

  /// e_ij in M_n.
  static MatrixUnitSystem standard(std::size_t n);
  /// e_ij (x) I_k inside M_n (x) M_k.
  static MatrixUnitSystem tensored(std::size_t n, std::size_t k);
  /// u w_ij u* for each unit.
  MatrixUnitSystem conjugated(const ComplexMatrix& u) const;
};

struct MatrixUnitReport {
  double adjoint_defect = 0.0;  // max ||w_ij* - w_ji||_F
  double product_defect = 0.0;  // max ||w_ij w_kl - delta_jk w_il||_F
  double sum_defect = 0.0;      // ||sum_i w_ii - I||_F
  bool pass = false;
};

MatrixUnitReport verify_matrix_units(const MatrixUnitSystem& sys, double tol);

/// Orthonormal basis (columns) of the range of a projection, from pivoted
/// Gram-Schmidt on its columns.  Throws NumericalError when the input is not
/// numerically a projection with a clean rank.
ComplexMatrix projection_range_basis(const ComplexMatrix& projection, double threshold = 1e-10);

/// rho(x) = sum_ij e_ij (x) Q* w_1i x w_j1 Q, where Q is an orthonormal basis of
/// range(w_11).  Output lives in M_n (x) M_r with r = rank(w_11).
ComplexMatrix takesaki_iso(const MatrixUnitSystem& sys, const ComplexMatrix& x);

/// Unitary u with u f_ij u* = g_ij.  Built as sum_k g_k1 t f_1k, where t is a
/// partial isometry from range(f_11) onto range(g_11), then re-unitarized.
/// Throws DomainError when either system fails verify_matrix_units at 1e-8.
ComplexMatrix conjugating_unitary(const MatrixUnitSystem& f, const MatrixUnitSystem& g);

struct NormingPair {
  ComplexMatrix x;  // as given
  ComplexMatrix y;  // norming functional, ||y||_q = 1 and tr(x y) = ||x||_p
  double p = 2.0;
  double q = 2.0;
  ComplexMatrix u;  // partial isometry of the polar decomposition of x
  // Checks on the structure of y:  || |y| - u |x^|^{p-1} u* ||_F  and
  // || y - u* |y| ||_F, with x^ = x / ||x||_p.
  double abs_y_defect = 0.0;
  double polar_defect = 0.0;
};

/// y = |x^|^{p-1} u* for x^ = x / ||x||_p = u |x^|.  Requires x != 0 and
/// 1 < p < infinity.
NormingPair norming_functional(const ComplexMatrix& x, double p);

/// Smallest singular value of z -> x z x on the corner s(x) M s(x), for PSD
/// x != 0.  Equal to the square of the smallest nonzero eigenvalue of x.
double support_compression_injectivity(const ComplexMatrix& x, double tol = kDefaultTol);

}  // namespace schurdil
