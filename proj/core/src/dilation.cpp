#include "schurdil/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

namespace schurdil {

namespace {

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t p = dims.size(); p-- > 1;) strides[p - 1] = strides[p] * dims[p];
  return strides;
}

// Basis permutation that moves the digit at tensor position `from[p]` to
// position p.
std::vector<std::size_t> factor_permutation(const std::vector<std::size_t>& dims,
                                            const std::vector<std::size_t>& from) {
  const std::vector<std::size_t> strides = strides_of(dims);
  std::size_t total = 1;
  for (const std::size_t d : dims) total *= d;
  std::vector<std::size_t> perm(total);
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t p = 0; p < dims.size(); ++p) digits[p] = (r / strides[p]) % dims[p];
    std::size_t image = 0;
    for (std::size_t p = 0; p < dims.size(); ++p) image += digits[from[p]] * strides[p];
    perm[r] = image;
  }
  return perm;
}

// out(perm[r], perm[c]) = y(r, c)
ComplexMatrix permute(const ComplexMatrix& y, const std::vector<std::size_t>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  ComplexMatrix out(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto pc = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(c)]);
    for (Eigen::Index r = 0; r < n; ++r) {
      out(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(r)]), pc) = y(r, c);
    }
  }
  return out;
}

// out(r, c) = y(perm[r], perm[c])
ComplexMatrix permute_inverse(const ComplexMatrix& y, const std::vector<std::size_t>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  ComplexMatrix out(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto pc = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(c)]);
    for (Eigen::Index r = 0; r < n; ++r) {
      out(r, c) = y(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(r)]), pc);
    }
  }
  return out;
}

// z <- (I_a (x) op (x) I_b) z
void left_local(ComplexMatrix& z, std::size_t a, const ComplexMatrix& op, std::size_t b) {
  const auto d = static_cast<std::size_t>(op.rows());
  std::vector<Complex> in(d);
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    for (std::size_t alpha = 0; alpha < a; ++alpha) {
      for (std::size_t beta = 0; beta < b; ++beta) {
        for (std::size_t t = 0; t < d; ++t) {
          in[t] = z(static_cast<Eigen::Index>((alpha * d + t) * b + beta), c);
        }
        for (std::size_t s = 0; s < d; ++s) {
          Complex acc{0.0, 0.0};
          for (std::size_t t = 0; t < d; ++t) {
            acc += op(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) * in[t];
          }
          z(static_cast<Eigen::Index>((alpha * d + s) * b + beta), c) = acc;
        }
      }
    }
  }
}

// z <- z (I_a (x) op (x) I_b)
void right_local(ComplexMatrix& z, std::size_t a, const ComplexMatrix& op, std::size_t b) {
  const auto d = static_cast<std::size_t>(op.rows());
  ComplexMatrix in(z.rows(), static_cast<Eigen::Index>(d));
  for (std::size_t alpha = 0; alpha < a; ++alpha) {
    for (std::size_t beta = 0; beta < b; ++beta) {
      for (std::size_t t = 0; t < d; ++t) {
        in.col(static_cast<Eigen::Index>(t)) = z.col(static_cast<Eigen::Index>((alpha * d + t) * b + beta));
      }
      for (std::size_t s = 0; s < d; ++s) {
        z.col(static_cast<Eigen::Index>((alpha * d + s) * b + beta)) =
            in * op.col(static_cast<Eigen::Index>(s));
      }
    }
  }
}

// Factors before and after slot l inside the tail M_D^{(x)K}, where slot l
// of the first block is the one u^l touches.
std::pair<std::size_t, std::size_t> slot_split(const TruncatedDilation& dil, std::size_t l) {
  std::size_t before = 1;
  for (std::size_t q = 0; q < l; ++q) before *= dil.witnesses()[q].d;
  const std::size_t after = dil.tail_dim() / (before * dil.witnesses()[l].d);
  return {before, after};
}

void require_total(const TruncatedDilation& dil, const ComplexMatrix& y, const char* what) {
  const auto t = static_cast<Eigen::Index>(dil.total_dim());
  if (y.rows() != t || y.cols() != t) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(t) + "x" +
                         std::to_string(t) + ", got " + std::to_string(y.rows()) + "x" +
                         std::to_string(y.cols()));
  }
}

void require_index(const TruncatedDilation& dil, std::size_t l, const char* what) {
  if (l >= dil.multiplier_count()) {
    throw DimensionError(std::string(what) + ": multiplier index " + std::to_string(l) +
                         " out of range");
  }
}

// (u^l)* z u^l, or u^l z (u^l)* when inverting
ComplexMatrix conjugate_by_u(const TruncatedDilation& dil, std::size_t l, const ComplexMatrix& z,
                             bool inverse) {
  const auto tail = static_cast<Eigen::Index>(dil.tail_dim());
  const auto [before, after] = slot_split(dil, l);
  const auto& v = dil.witnesses()[l].v;
  ComplexMatrix out(z.rows(), z.cols());
  for (std::size_t i = 0; i < dil.n(); ++i) {
    for (std::size_t j = 0; j < dil.n(); ++j) {
      ComplexMatrix blk = z.block(static_cast<Eigen::Index>(i) * tail,
                                  static_cast<Eigen::Index>(j) * tail, tail, tail);
      if (inverse) {
        left_local(blk, before, v[i], after);
        right_local(blk, before, v[j].adjoint(), after);
      } else {
        left_local(blk, before, v[i].adjoint(), after);
        right_local(blk, before, v[j], after);
      }
      out.block(static_cast<Eigen::Index>(i) * tail, static_cast<Eigen::Index>(j) * tail, tail,
                tail) = blk;
    }
  }
  return out;
}

// tr(a b) without forming the product
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

ComplexMatrix unit(std::size_t n, std::size_t i, std::size_t j) {
  const auto s = static_cast<Eigen::Index>(n);
  ComplexMatrix e = ComplexMatrix::Zero(s, s);
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

void check_symbols(const TruncatedDilation& dil, std::span<const SchurSymbol> symbols) {
  if (symbols.size() != dil.multiplier_count()) {
    throw DimensionError("dilation: expected " + std::to_string(dil.multiplier_count()) +
                         " symbols, got " + std::to_string(symbols.size()));
  }
  for (const auto& s : symbols) {
    if (s.n() != dil.n()) throw DimensionError("dilation: symbol size differs from n");
  }
}

}  // namespace

std::vector<std::size_t> TruncatedDilation::tensor_dims() const {
  std::vector<std::size_t> dims{n_};
  for (std::size_t b = 0; b < depth_; ++b) {
    for (const auto& w : witnesses_) dims.push_back(w.d);
  }
  return dims;
}

ComplexMatrix TruncatedDilation::unitary(std::size_t l) const {
  require_index(*this, l, "unitary");
  const auto [before, after] = slot_split(*this, l);
  const auto tail = static_cast<Eigen::Index>(tail_dim_);
  ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(total_dim()),
                                        static_cast<Eigen::Index>(total_dim()));
  for (std::size_t j = 0; j < n_; ++j) {
    const ComplexMatrix local = tensor_product(
        tensor_product(identity(before), witnesses_[l].v[j], tail_dim_), identity(after), tail_dim_);
    u.block(static_cast<Eigen::Index>(j) * tail, static_cast<Eigen::Index>(j) * tail, tail, tail) = local;
  }
  return u;
}

const std::vector<std::size_t>& TruncatedDilation::permutation(std::size_t l) const {
  require_index(*this, l, "permutation");
  return shift_ == ShiftMode::Joint ? joint_perm_ : slot_perm_[l];
}

TruncatedDilation build_dilation(std::vector<UnitaryWitness> witnesses, std::size_t depth,
                                 const DilationOptions& options) {
  if (witnesses.empty()) throw DimensionError("build_dilation: no witnesses");
  if (depth == 0) throw DimensionError("build_dilation: depth must be positive");
  const std::size_t n = witnesses.front().v.size();
  std::size_t block = 1;
  for (const auto& w : witnesses) {
    if (w.v.size() != n) throw DimensionError("build_dilation: witnesses disagree on n");
    if (w.d == 0) throw DimensionError("build_dilation: witness dimension is zero");
    for (const auto& v : w.v) {
      if (v.rows() != static_cast<Eigen::Index>(w.d) || v.cols() != v.rows()) {
        throw DimensionError("build_dilation: unitary has wrong size");
      }
      if (unitarity_defect(v) > 1e-10) {
        throw DomainError("build_dilation: witness entry is not unitary within 1e-10");
      }
    }
    block *= w.d;
  }
  std::size_t tail = 1;
  for (std::size_t k = 0; k < depth; ++k) {
    if (tail > options.max_total_dim / block) {
      throw DimensionError("build_dilation: total dimension exceeds cap " +
                           std::to_string(options.max_total_dim));
    }
    tail *= block;
  }
  if (n * tail > options.max_total_dim) {
    throw DimensionError("build_dilation: total dimension " + std::to_string(n * tail) +
                         " exceeds cap " + std::to_string(options.max_total_dim));
  }

  TruncatedDilation dil;
  dil.n_ = n;
  dil.depth_ = depth;
  dil.block_dim_ = block;
  dil.tail_dim_ = tail;
  dil.shift_ = options.shift;
  dil.witnesses_ = std::move(witnesses);

  const std::vector<std::size_t> dims = dil.tensor_dims();
  const std::size_t count = dil.witnesses_.size();
  auto position = [count](std::size_t b, std::size_t l) { return 1 + b * count + l; };

  std::vector<std::size_t> from(dims.size());
  for (std::size_t p = 0; p < dims.size(); ++p) from[p] = p;
  std::vector<std::size_t> joint = from;
  for (std::size_t b = 0; b < depth; ++b) {
    for (std::size_t l = 0; l < count; ++l) joint[position((b + 1) % depth, l)] = position(b, l);
  }
  dil.joint_perm_ = factor_permutation(dims, joint);

  for (std::size_t l = 0; l < count; ++l) {
    std::vector<std::size_t> slot = from;
    for (std::size_t b = 0; b < depth; ++b) slot[position((b + 1) % depth, l)] = position(b, l);
    dil.slot_perm_.push_back(factor_permutation(dims, slot));
  }
  return dil;
}

ComplexMatrix embed_J(const TruncatedDilation& dil, const ComplexMatrix& x) {
  const auto n = static_cast<Eigen::Index>(dil.n());
  if (x.rows() != n || x.cols() != n) throw DimensionError("embed_J: input must be n x n");
  return tensor_product(x, identity(dil.tail_dim()), dil.total_dim());
}

ComplexMatrix shift_S(const TruncatedDilation& dil, const ComplexMatrix& y) {
  require_total(dil, y, "shift_S");
  return permute(y, dil.joint_permutation());
}

ComplexMatrix shift_S_inverse(const TruncatedDilation& dil, const ComplexMatrix& y) {
  require_total(dil, y, "shift_S_inverse");
  return permute_inverse(y, dil.joint_permutation());
}

ComplexMatrix shift_slot(const TruncatedDilation& dil, std::size_t l, const ComplexMatrix& y) {
  require_total(dil, y, "shift_slot");
  require_index(dil, l, "shift_slot");
  if (dil.shift_mode() == ShiftMode::PerMultiplier) return permute(y, dil.permutation(l));
  // permutation(l) is the joint one in Joint mode; rebuild the slot shift
  const std::vector<std::size_t> dims = dil.tensor_dims();
  const std::size_t count = dil.multiplier_count();
  std::vector<std::size_t> from(dims.size());
  for (std::size_t p = 0; p < dims.size(); ++p) from[p] = p;
  for (std::size_t b = 0; b < dil.depth(); ++b) {
    from[1 + ((b + 1) % dil.depth()) * count + l] = 1 + b * count + l;
  }
  return permute(y, factor_permutation(dims, from));
}

ComplexMatrix apply_U(const TruncatedDilation& dil, std::size_t l, const ComplexMatrix& y) {
  require_total(dil, y, "apply_U");
  require_index(dil, l, "apply_U");
  return conjugate_by_u(dil, l, permute(y, dil.permutation(l)), false);
}

ComplexMatrix apply_U_inverse(const TruncatedDilation& dil, std::size_t l, const ComplexMatrix& y) {
  require_total(dil, y, "apply_U_inverse");
  require_index(dil, l, "apply_U_inverse");
  return permute_inverse(conjugate_by_u(dil, l, y, true), dil.permutation(l));
}

ComplexMatrix expect_E(const TruncatedDilation& dil, const ComplexMatrix& y) {
  require_total(dil, y, "expect_E");
  const auto n = static_cast<Eigen::Index>(dil.n());
  const auto tail = static_cast<Eigen::Index>(dil.tail_dim());
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = y.block(i * tail, j * tail, tail, tail).trace() / static_cast<double>(tail);
    }
  }
  return out;
}

std::vector<MultiIndex> multi_indices(std::size_t count, std::size_t max_total) {
  std::vector<MultiIndex> out;
  MultiIndex k(count, 0);
  std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t pos, std::size_t budget) {
    if (pos == count) {
      out.push_back(k);
      return;
    }
    for (std::size_t c = 0; c <= budget; ++c) {
      k[pos] = c;
      fill(pos + 1, budget - c);
    }
    k[pos] = 0;
  };
  fill(0, max_total);
  return out;
}

double index_deviation(const TruncatedDilation& dil, std::span<const SchurSymbol> symbols,
                       const MultiIndex& k) {
  check_symbols(dil, symbols);
  if (k.size() != dil.multiplier_count()) throw DimensionError("index_deviation: index length");
  double worst = 0.0;
  for (std::size_t i = 0; i < dil.n(); ++i) {
    for (std::size_t j = 0; j < dil.n(); ++j) {
      const ComplexMatrix e = unit(dil.n(), i, j);
      ComplexMatrix lhs = e;
      ComplexMatrix y = embed_J(dil, e);
      for (std::size_t l = dil.multiplier_count(); l-- > 0;) {
        for (std::size_t c = 0; c < k[l]; ++c) {
          lhs = apply_multiplier(symbols[l], lhs);
          y = apply_U(dil, l, y);
        }
      }
      worst = std::max(worst, (lhs - expect_E(dil, y)).norm());
    }
  }
  return worst;
}

DilationReport verify_dilation(const TruncatedDilation& dil, std::span<const SchurSymbol> symbols,
                               double tol) {
  check_symbols(dil, symbols);
  for (std::size_t l = 0; l < symbols.size(); ++l) {
    const double mismatch = residual(dil.witnesses()[l], symbols[l]);
    if (mismatch > 10.0 * tol) {
      throw DomainError("verify_dilation: witness " + std::to_string(l) +
                        " Gram matrix differs from its symbol by " + std::to_string(mismatch));
    }
  }

  DilationReport report;
  report.tolerance = tol;
  const std::size_t count = dil.multiplier_count();
  for (const auto& k : multi_indices(count, dil.depth())) report.per_index[k] = 0.0;

  // Walk U_{L-1} first, U_0 last, reusing the partial products along the way.
  MultiIndex k(count, 0);
  for (std::size_t i = 0; i < dil.n(); ++i) {
    for (std::size_t j = 0; j < dil.n(); ++j) {
      const ComplexMatrix e = unit(dil.n(), i, j);
      std::function<void(std::size_t, ComplexMatrix, ComplexMatrix, std::size_t)> walk =
          [&](std::size_t l, ComplexMatrix y, ComplexMatrix lhs, std::size_t budget) {
            for (std::size_t c = 0; c <= budget; ++c) {
              k[l] = c;
              if (l == 0) {
                const double dev = (lhs - expect_E(dil, y)).norm();
                double& slot = report.per_index[k];
                slot = std::max(slot, dev);
              } else {
                walk(l - 1, y, lhs, budget - c);
              }
              if (c < budget) {
                y = apply_U(dil, l, y);
                lhs = apply_multiplier(symbols[l], lhs);
              }
            }
            k[l] = 0;
          };
      walk(count - 1, embed_J(dil, e), e, dil.depth());
    }
  }
  for (const auto& [index, dev] : report.per_index) {
    report.max_deviation = std::max(report.max_deviation, dev);
  }

  std::mt19937_64 rng(0x5eedu);
  const auto n = static_cast<Eigen::Index>(dil.n());
  const auto total = static_cast<Eigen::Index>(dil.total_dim());
  const double tail = static_cast<double>(dil.tail_dim());
  constexpr int kSamples = 3;
  for (int s = 0; s < kSamples; ++s) {
    ComplexMatrix y = random_matrix(rng, total, total);
    y /= y.norm();
    ComplexMatrix x = random_matrix(rng, n, n);
    x /= x.norm();
    const Complex tau_y = trace(y, TraceMode::Normalized);

    report.trace_defect = std::max(
        report.trace_defect,
        std::abs(trace(embed_J(dil, x), TraceMode::Normalized) - trace(x, TraceMode::Normalized)));
    report.trace_defect = std::max(
        report.trace_defect, std::abs(trace(expect_E(dil, y), TraceMode::Normalized) - tau_y));

    std::vector<ComplexMatrix> images;
    for (std::size_t l = 0; l < count; ++l) {
      images.push_back(apply_U(dil, l, y));
      report.trace_defect = std::max(report.trace_defect,
                                     std::abs(trace(images.back(), TraceMode::Normalized) - tau_y));
    }
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = a + 1; b < count; ++b) {
        const double c = (apply_U(dil, a, images[b]) - apply_U(dil, b, images[a])).norm();
        report.commutator_norm = std::max(report.commutator_norm, c);
      }
    }

    // tr(T_M(x) z) = (tr_n (x) tau)(U(J(x)) J(z))
    ComplexMatrix z = random_matrix(rng, n, n);
    z /= z.norm();
    const ComplexMatrix jz = embed_J(dil, z);
    for (std::size_t l = 0; l < count; ++l) {
      const Complex lhs = (apply_multiplier(symbols[l], x) * z).trace();
      const Complex rhs = trace_of_product(apply_U(dil, l, embed_J(dil, x)), jz) / tail;
      report.duality_defect = std::max(report.duality_defect, std::abs(lhs - rhs));
    }
  }

  report.pass = report.max_deviation <= tol && report.commutator_norm <= tol &&
                report.trace_defect <= tol && report.duality_defect <= tol;
  return report;
}

}  // namespace schurdil
