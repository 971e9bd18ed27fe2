#include "schurdil/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace schurdil {

namespace {

constexpr double kSystemTol = 1e-8;

ComplexMatrix unit(std::size_t n, std::size_t i, std::size_t j) {
  const auto s = static_cast<Eigen::Index>(n);
  ComplexMatrix e = ComplexMatrix::Zero(s, s);
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

void require_shape(const MatrixUnitSystem& sys, const char* what) {
  if (sys.n == 0 || sys.w.size() != sys.n * sys.n) {
    throw DimensionError(std::string(what) + ": system must hold n*n units");
  }
  const auto big = static_cast<Eigen::Index>(sys.ambient_dim);
  for (const auto& wij : sys.w) {
    if (wij.rows() != big || wij.cols() != big) {
      throw DimensionError(std::string(what) + ": unit does not match ambient dimension");
    }
  }
}

}  // namespace

MatrixUnitSystem MatrixUnitSystem::standard(std::size_t n) { return tensored(n, 1); }

MatrixUnitSystem MatrixUnitSystem::tensored(std::size_t n, std::size_t k) {
  MatrixUnitSystem sys;
  sys.n = n;
  sys.ambient_dim = n * k;
  sys.w.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sys.w.push_back(tensor_product(unit(n, i, j), identity(k)));
  }
  return sys;
}

MatrixUnitSystem MatrixUnitSystem::conjugated(const ComplexMatrix& u) const {
  MatrixUnitSystem out = *this;
  for (auto& wij : out.w) wij = u * wij * u.adjoint();
  return out;
}

MatrixUnitReport verify_matrix_units(const MatrixUnitSystem& sys, double tol) {
  require_shape(sys, "verify_matrix_units");
  const std::size_t n = sys.n;
  MatrixUnitReport r;
  ComplexMatrix diag_sum = ComplexMatrix::Zero(static_cast<Eigen::Index>(sys.ambient_dim),
                                               static_cast<Eigen::Index>(sys.ambient_dim));
  for (std::size_t i = 0; i < n; ++i) {
    diag_sum += sys(i, i);
    for (std::size_t j = 0; j < n; ++j) {
      r.adjoint_defect = std::max(r.adjoint_defect, (sys(i, j).adjoint() - sys(j, i)).norm());
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          ComplexMatrix prod = sys(i, j) * sys(k, l);
          if (j == k) prod -= sys(i, l);
          r.product_defect = std::max(r.product_defect, prod.norm());
        }
      }
    }
  }
  r.sum_defect = (diag_sum - identity(sys.ambient_dim)).norm();
  r.pass = r.adjoint_defect <= tol && r.product_defect <= tol && r.sum_defect <= tol;
  return r;
}

ComplexMatrix projection_range_basis(const ComplexMatrix& projection, double threshold) {
  require_square(projection, "projection_range_basis");
  const Eigen::Index dim = projection.rows();
  ComplexMatrix residual = projection;
  std::vector<Eigen::VectorXcd> basis;
  while (static_cast<Eigen::Index>(basis.size()) < dim) {
    Eigen::Index pick = -1;
    double best = threshold;
    for (Eigen::Index c = 0; c < dim; ++c) {
      const double len = residual.col(c).norm();
      if (len > best) {
        best = len;
        pick = c;
      }
    }
    if (pick < 0) break;
    Eigen::VectorXcd q = residual.col(pick);
    for (const auto& b : basis) q -= b * b.dot(q);  // re-orthogonalize
    q.normalize();
    basis.push_back(q);
    residual -= q * (q.adjoint() * residual);
  }

  ComplexMatrix out(dim, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = basis[k];
  if ((out * out.adjoint() - projection).norm() > kSystemTol) {
    throw NumericalError("projection_range_basis: input is not a projection of well-defined rank");
  }
  return out;
}

ComplexMatrix takesaki_iso(const MatrixUnitSystem& sys, const ComplexMatrix& x) {
  require_shape(sys, "takesaki_iso");
  const auto big = static_cast<Eigen::Index>(sys.ambient_dim);
  if (x.rows() != big || x.cols() != big) {
    throw DimensionError("takesaki_iso: input does not match the ambient dimension");
  }
  const ComplexMatrix corner = projection_range_basis(sys(0, 0));
  const Eigen::Index r = corner.cols();
  const auto n = static_cast<Eigen::Index>(sys.n);
  ComplexMatrix out(n * r, n * r);
  for (std::size_t i = 0; i < sys.n; ++i) {
    for (std::size_t j = 0; j < sys.n; ++j) {
      out.block(static_cast<Eigen::Index>(i) * r, static_cast<Eigen::Index>(j) * r, r, r) =
          corner.adjoint() * sys(0, i) * x * sys(j, 0) * corner;
    }
  }
  return out;
}

ComplexMatrix conjugating_unitary(const MatrixUnitSystem& f, const MatrixUnitSystem& g) {
  require_shape(f, "conjugating_unitary");
  require_shape(g, "conjugating_unitary");
  if (f.n != g.n || f.ambient_dim != g.ambient_dim) {
    throw DimensionError("conjugating_unitary: systems differ in size");
  }
  if (!verify_matrix_units(f, kSystemTol).pass || !verify_matrix_units(g, kSystemTol).pass) {
    throw DomainError("conjugating_unitary: input is not a system of matrix units");
  }
  const ComplexMatrix qf = projection_range_basis(f(0, 0));
  const ComplexMatrix qg = projection_range_basis(g(0, 0));
  if (qf.cols() != qg.cols()) {
    throw DomainError("conjugating_unitary: f_11 and g_11 have different ranks");
  }
  const ComplexMatrix t = qg * qf.adjoint();
  ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(f.ambient_dim),
                                        static_cast<Eigen::Index>(f.ambient_dim));
  for (std::size_t k = 0; k < f.n; ++k) u += g(k, 0) * t * f(0, k);
  return unitary_polar_factor(u);
}

NormingPair norming_functional(const ComplexMatrix& x, double p) {
  require_square(x, "norming_functional");
  require_finite(x, "norming_functional");
  if (!(p > 1.0) || std::isinf(p)) {
    throw DomainError("norming_functional: exponent must satisfy 1 < p < infinity");
  }
  const double norm = schatten_norm(x, p);
  if (norm == 0.0) throw DomainError("norming_functional: x must be nonzero");

  NormingPair out;
  out.x = x;
  out.p = p;
  out.q = p / (p - 1.0);

  const PolarData polar = polar_decompose(x / norm);
  const ComplexMatrix power =
      hermitian_function(polar.absx, [p](double s) { return std::pow(s, p - 1.0); }, true);
  out.u = polar.u;
  out.y = power * polar.u.adjoint();

  const PolarData polar_y = polar_decompose(out.y);
  out.abs_y_defect = (polar_y.absx - polar.u * power * polar.u.adjoint()).norm();
  out.polar_defect = (out.y - polar.u.adjoint() * polar_y.absx).norm();
  return out;
}

double support_compression_injectivity(const ComplexMatrix& x, double tol) {
  require_square(x, "support_compression_injectivity");
  require_finite(x, "support_compression_injectivity");
  if (hermitian_defect(x) > tol) {
    throw DomainError("support_compression_injectivity: x is not Hermitian");
  }
  const HermitianEigen eig = hermitian_eigen(x);
  if (eig.values.minCoeff() < -tol) {
    throw DomainError("support_compression_injectivity: x is not positive semi-definite");
  }
  const double cut = support_threshold(eig.values);
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > cut) support.push_back(k);
  }
  if (support.empty()) throw DomainError("support_compression_injectivity: x must be nonzero");

  const auto r = static_cast<Eigen::Index>(support.size());
  ComplexMatrix q(x.rows(), r);
  for (Eigen::Index k = 0; k < r; ++k) q.col(k) = eig.vectors.col(support[static_cast<std::size_t>(k)]);
  const ComplexMatrix corner = q.adjoint() * x * q;

  // vec(c z c) = (c^T (x) c) vec(z); Hermitian since c is.
  const ComplexMatrix superop = tensor_product(corner.transpose(), corner);
  return hermitian_eigen(superop).values.cwiseAbs().minCoeff();
}

}  // namespace schurdil
