#include "schurdil/schur.hpp"

#include <cmath>
#include <string>

namespace schurdil {

SchurSymbol::SchurSymbol(ComplexMatrix m, double tol) : m_(std::move(m)) {
  require_square(m_, "SchurSymbol");
  require_finite(m_, "SchurSymbol");
  report_ = validate_symbol(*this, tol);
}

SchurSymbol SchurSymbol::all_ones(std::size_t n) {
  const auto s = static_cast<Eigen::Index>(n);
  return SchurSymbol(ComplexMatrix::Ones(s, s));
}

SchurSymbol SchurSymbol::identity(std::size_t n) { return SchurSymbol(schurdil::identity(n)); }

ValidityReport validate_symbol(const SchurSymbol& symbol, double tol) {
  const ComplexMatrix& m = symbol.matrix();
  ValidityReport r;
  r.hermitian = hermitian_defect(m) <= tol;
  r.min_eigenvalue = hermitian_eigen(m).values.minCoeff();
  r.psd = r.hermitian && r.min_eigenvalue >= -tol;
  double diag = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) diag = std::max(diag, std::abs(m(i, i) - 1.0));
  r.unit_diagonal = diag <= tol;
  return r;
}

void require_valid_symbol(const SchurSymbol& symbol, double tol) {
  const ValidityReport r = validate_symbol(symbol, tol);
  if (r.valid()) return;
  std::string why;
  auto add = [&why](const char* s) {
    if (!why.empty()) why += ", ";
    why += s;
  };
  if (!r.hermitian) add("not Hermitian");
  if (!r.psd) add("not positive semi-definite");
  if (!r.unit_diagonal) add("diagonal entries differ from 1");
  throw InvalidSymbolError("invalid symbol: " + why + " (min eigenvalue " +
                           std::to_string(r.min_eigenvalue) + ")");
}

ComplexMatrix apply_multiplier(const SchurSymbol& symbol, const ComplexMatrix& a) {
  if (a.rows() != symbol.matrix().rows() || a.cols() != symbol.matrix().cols()) {
    throw DimensionError("apply_multiplier: input is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", symbol has n = " +
                         std::to_string(symbol.n()));
  }
  return symbol.matrix().cwiseProduct(a);
}

ComplexMatrix apply_multiplier_amplified(const SchurSymbol& symbol, const ComplexMatrix& a,
                                         std::size_t k) {
  const auto n = static_cast<Eigen::Index>(symbol.n());
  const auto kk = static_cast<Eigen::Index>(k);
  if (k == 0 || a.rows() != n * kk || a.cols() != n * kk) {
    throw DimensionError("apply_multiplier_amplified: input does not act on C^n (x) C^k");
  }
  ComplexMatrix out = a;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out.block(i * kk, j * kk, kk, kk) *= symbol.matrix()(i, j);
  }
  return out;
}

ComplexMatrix choi_matrix(const SchurSymbol& symbol) {
  const auto n = static_cast<Eigen::Index>(symbol.n());
  ComplexMatrix c = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) c(i * n + i, j * n + j) = symbol.matrix()(i, j);
  }
  return c;
}

}  // namespace schurdil
