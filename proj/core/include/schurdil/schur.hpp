#pragma once

// Schur multipliers T_M : A -> (m_ij a_ij) and the positivity / unitality
// checks on their symbol M.

#include <cstddef>

#include "schurdil/numcore.hpp"

namespace schurdil {

struct ValidityReport {
  bool hermitian = false;
  bool psd = false;
  bool unit_diagonal = false;
  double min_eigenvalue = 0.0;  // of the Hermitian part

  /// Hermitian, PSD and unit diagonal: the symbol defines a unital positive
  /// (hence completely positive) multiplier.
  bool valid() const { return hermitian && psd && unit_diagonal; }
};

/// Symbol matrix of a Schur multiplier.  The validity report is computed
/// once at construction with the given tolerance.
class SchurSymbol {
 public:
  explicit SchurSymbol(ComplexMatrix m, double tol = kDefaultTol);

  std::size_t n() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  const ValidityReport& report() const { return report_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  static SchurSymbol all_ones(std::size_t n);
  static SchurSymbol identity(std::size_t n);

 private:
  ComplexMatrix m_;
  ValidityReport report_;
};

/// psd <=> hermitian and min eigenvalue >= -tol; unit_diagonal <=>
/// max_i |m_ii - 1| <= tol.
ValidityReport validate_symbol(const SchurSymbol& symbol, double tol = kDefaultTol);

/// Throws InvalidSymbolError naming the failed conditions.
void require_valid_symbol(const SchurSymbol& symbol, double tol = kDefaultTol);

/// Hadamard product M o a.
ComplexMatrix apply_multiplier(const SchurSymbol& symbol, const ComplexMatrix& a);

/// (T_M (x) id_k)(a) for a acting on C^n (x) C^k: block (i,j) is scaled by m_ij.
ComplexMatrix apply_multiplier_amplified(const SchurSymbol& symbol, const ComplexMatrix& a,
                                         std::size_t k);

/// sum_ij e_ij (x) T_M(e_ij) = sum_ij m_ij e_ij (x) e_ij, of size n^2.
ComplexMatrix choi_matrix(const SchurSymbol& symbol);

}  // namespace schurdil
