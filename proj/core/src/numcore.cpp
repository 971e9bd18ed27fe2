#include "schurdil/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace schurdil {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Support cutoff for eigenvalues of a*a.  Singular values obtained as square
// roots of these eigenvalues are only resolved to ~sqrt(eps) relative to the
// largest one, so the relative cutoff is applied to the squared spectrum.
double gram_support_threshold(const RealVector& gram_eigenvalues) {
  const double top = gram_eigenvalues.size() ? gram_eigenvalues.maxCoeff() : 0.0;
  const double n = static_cast<double>(gram_eigenvalues.size());
  return std::max(n * kEps * top, 1e-24);
}

}  // namespace

ComplexMatrix identity(std::size_t n) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(n),
                                 static_cast<Eigen::Index>(n));
}

void require_finite(const ComplexMatrix& a, const char* what) {
  if (!a.allFinite()) {
    throw DomainError(std::string(what) + ": matrix has non-finite entries");
  }
}

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

Complex trace(const ComplexMatrix& a, TraceMode mode) {
  require_square(a, "trace");
  Complex t = a.trace();
  if (mode == TraceMode::Normalized) t /= static_cast<double>(a.rows());
  return t;
}

double hermitian_defect(const ComplexMatrix& a) {
  require_square(a, "hermitian_defect");
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& a) {
  require_square(a, "unitarity_defect");
  return (a.adjoint() * a - ComplexMatrix::Identity(a.rows(), a.cols())).norm();
}

HermitianEigen hermitian_eigen(const ComplexMatrix& a) {
  require_square(a, "hermitian_eigen");
  require_finite(a, "hermitian_eigen");
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian_eigen: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double support_threshold(const RealVector& eigenvalues) {
  const double top = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  const double n = static_cast<double>(eigenvalues.size());
  return std::max(n * kEps * top, 1e-12);
}

ComplexMatrix support_projection(const ComplexMatrix& h) {
  const HermitianEigen eig = hermitian_eigen(h);
  const double cut = support_threshold(eig.values);
  ComplexMatrix p = ComplexMatrix::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > cut) p += eig.vectors.col(k) * eig.vectors.col(k).adjoint();
  }
  return p;
}

RealVector singular_values(const ComplexMatrix& a) {
  require_finite(a, "singular_values");
  const HermitianEigen eig = hermitian_eigen(a.adjoint() * a);
  const Eigen::Index n = eig.values.size();
  RealVector s(n);
  // eigenvalues come ascending; report descending
  for (Eigen::Index k = 0; k < n; ++k) {
    s(k) = std::sqrt(std::max(eig.values(n - 1 - k), 0.0));
  }
  return s;
}

double schatten_norm(const ComplexMatrix& a, double p, TraceMode mode) {
  require_square(a, "schatten_norm");
  if (std::isnan(p) || p < 1.0) {
    throw DomainError("schatten_norm: exponent must satisfy p >= 1");
  }
  const RealVector s = singular_values(a);
  if (std::isinf(p)) return s.maxCoeff();

  const double top = s.maxCoeff();
  if (top == 0.0) return 0.0;
  // scale by the largest singular value so s^p cannot overflow for large p
  double acc = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) acc += std::pow(s(k) / top, p);
  if (mode == TraceMode::Normalized) acc /= static_cast<double>(a.rows());
  return top * std::pow(acc, 1.0 / p);
}

PolarData polar_decompose(const ComplexMatrix& a) {
  require_square(a, "polar_decompose");
  const HermitianEigen eig = hermitian_eigen(a.adjoint() * a);
  const double cut = gram_support_threshold(eig.values);

  const Eigen::Index n = a.rows();
  RealVector sigma(n);
  RealVector inv_sigma(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = eig.values(k);
    if (lambda > cut) {
      sigma(k) = std::sqrt(lambda);
      inv_sigma(k) = 1.0 / sigma(k);
    } else {
      sigma(k) = 0.0;
      inv_sigma(k) = 0.0;
    }
  }
  const ComplexMatrix& v = eig.vectors;
  PolarData out;
  out.absx = v * sigma.cast<Complex>().asDiagonal() * v.adjoint();
  out.u = a * v * inv_sigma.cast<Complex>().asDiagonal() * v.adjoint();
  return out;
}

ComplexMatrix unitary_polar_factor(const ComplexMatrix& a) {
  require_square(a, "unitary_polar_factor");
  const HermitianEigen eig = hermitian_eigen(a.adjoint() * a);
  const double cut = gram_support_threshold(eig.values);
  const Eigen::Index n = a.rows();

  // Left singular vectors for the supported part; the remainder is completed
  // with an orthonormal basis of the orthogonal complement.
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  std::vector<Eigen::Index> missing;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (eig.values(k) > cut) {
      w.col(k) = a * eig.vectors.col(k) / std::sqrt(eig.values(k));
    } else {
      missing.push_back(k);
    }
  }
  if (!missing.empty()) {
    Eigen::Index probe = 0;
    for (const Eigen::Index k : missing) {
      for (; probe < n; ++probe) {
        Eigen::VectorXcd candidate = Eigen::VectorXcd::Unit(n, probe);
        for (int pass = 0; pass < 2; ++pass) {
          for (Eigen::Index j = 0; j < n; ++j) {
            if (w.col(j).squaredNorm() == 0.0) continue;
            candidate -= w.col(j) * w.col(j).dot(candidate);
          }
        }
        const double len = candidate.norm();
        if (len > 0.5) {
          w.col(k) = candidate / len;
          ++probe;
          break;
        }
      }
    }
  }
  ComplexMatrix u = w * eig.vectors.adjoint();
  // One Newton-Schulz sweep restores unitarity to working precision.
  u = 0.5 * u * (3.0 * ComplexMatrix::Identity(n, n) - u.adjoint() * u);
  return u;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b,
                             std::size_t max_dim) {
  const auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
  const auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
  if (rows > max_dim || cols > max_dim) {
    throw DimensionError("tensor_product: result " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " exceeds cap " + std::to_string(max_dim));
  }
  ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix tensor_product(std::span<const ComplexMatrix> factors, std::size_t max_dim) {
  if (factors.empty()) return identity(1);
  ComplexMatrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    out = tensor_product(out, factors[k], max_dim);
  }
  return out;
}

ComplexMatrix partial_trace_slot(const ComplexMatrix& y, std::span<const std::size_t> dims,
                                 std::size_t slot, TraceMode mode) {
  require_square(y, "partial_trace_slot");
  if (slot >= dims.size()) {
    throw DimensionError("partial_trace_slot: slot " + std::to_string(slot) +
                         " out of range for " + std::to_string(dims.size()) + " factors");
  }
  std::size_t total = 1;
  for (const std::size_t d : dims) {
    if (d == 0) throw DimensionError("partial_trace_slot: zero-dimensional factor");
    total *= d;
  }
  if (total != static_cast<std::size_t>(y.rows())) {
    throw DimensionError("partial_trace_slot: product of dims " + std::to_string(total) +
                         " does not match side length " + std::to_string(y.rows()));
  }

  std::size_t pre = 1;
  for (std::size_t k = 0; k < slot; ++k) pre *= dims[k];
  const std::size_t mid = dims[slot];
  const std::size_t post = total / (pre * mid);
  const auto out_dim = static_cast<Eigen::Index>(pre * post);

  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  for (std::size_t pc = 0; pc < pre; ++pc) {
    for (std::size_t qc = 0; qc < post; ++qc) {
      const auto oc = static_cast<Eigen::Index>(pc * post + qc);
      for (std::size_t pr = 0; pr < pre; ++pr) {
        for (std::size_t qr = 0; qr < post; ++qr) {
          const auto orow = static_cast<Eigen::Index>(pr * post + qr);
          Complex acc{0.0, 0.0};
          for (std::size_t k = 0; k < mid; ++k) {
            acc += y(static_cast<Eigen::Index>((pr * mid + k) * post + qr),
                     static_cast<Eigen::Index>((pc * mid + k) * post + qc));
          }
          out(orow, oc) = acc;
        }
      }
    }
  }
  if (mode == TraceMode::Normalized) out /= static_cast<double>(mid);
  return out;
}

}  // namespace schurdil
