#pragma once

// Truncated absolute dilation of a commuting family of Schur multipliers.
//
// The ambient algebra is M_n (x) B^{(x)K}, where each block B = M_{d_1} (x) ...
// (x) M_{d_L} carries one tensor slot per multiplier.  Given witnesses
// v^l_j for the symbols M_l:
//
//   J(x)     = x (x) 1
//   u^l      = sum_j e_jj (x) [slot l of block 1 holds v^l_j] (x) 1
//   U_l(y)   = (u^l)* shift(y) u^l
//   E(y)     = (id (x) tau^{(x)K})(y)        (normalized trace on the blocks)
//
// and T_{M_1}^{k_1} ... T_{M_L}^{k_L} = E U_1^{k_1} ... U_L^{k_L} J holds
// exactly for k_1 + ... + k_L <= K.  The tensor blocks are shifted
// cyclically, which keeps every map a trace-preserving *-automorphism of a
// finite algebra.

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "schurdil/numcore.hpp"
#include "schurdil/schur.hpp"
#include "schurdil/witness.hpp"

namespace schurdil {

enum class ShiftMode {
  /// U_l shifts only the slot-l factors of the blocks.  The U_l then act on
  /// disjoint tensor factors and commute on the whole algebra.
  PerMultiplier,
  /// U_l shifts whole blocks (every slot at once).  Commutation of distinct
  /// U_l only holds on the range reachable from J.
  Joint,
};

struct DilationOptions {
  std::size_t max_total_dim = 4096;
  ShiftMode shift = ShiftMode::PerMultiplier;
};

class TruncatedDilation {
 public:
  std::size_t n() const { return n_; }
  std::size_t depth() const { return depth_; }
  std::size_t multiplier_count() const { return witnesses_.size(); }
  /// D = d_1 * ... * d_L
  std::size_t block_dim() const { return block_dim_; }
  /// D^K, the dimension of all tensor blocks together
  std::size_t tail_dim() const { return tail_dim_; }
  /// n * D^K
  std::size_t total_dim() const { return n_ * tail_dim_; }
  ShiftMode shift_mode() const { return shift_; }
  const std::vector<UnitaryWitness>& witnesses() const { return witnesses_; }

  /// Factor dimensions in left-major order: n, then (d_1..d_L) repeated K times.
  std::vector<std::size_t> tensor_dims() const;

  /// Dense u^l.
  ComplexMatrix unitary(std::size_t l) const;

  /// Basis permutation implementing the joint cyclic block shift.
  const std::vector<std::size_t>& joint_permutation() const { return joint_perm_; }
  /// Basis permutation used by U_l (depends on the shift mode).
  const std::vector<std::size_t>& permutation(std::size_t l) const;

 private:
  friend TruncatedDilation build_dilation(std::vector<UnitaryWitness>, std::size_t,
                                          const DilationOptions&);
  TruncatedDilation() = default;

  std::size_t n_ = 0;
  std::size_t depth_ = 0;
  std::size_t block_dim_ = 1;
  std::size_t tail_dim_ = 1;
  ShiftMode shift_ = ShiftMode::PerMultiplier;
  std::vector<UnitaryWitness> witnesses_;
  std::vector<std::size_t> joint_perm_;
  std::vector<std::vector<std::size_t>> slot_perm_;
};

using MultiIndex = std::vector<std::size_t>;

struct DilationReport {
  double max_deviation = 0.0;
  std::map<MultiIndex, double> per_index;
  double commutator_norm = 0.0;
  double trace_defect = 0.0;
  double duality_defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Throws DimensionError when witnesses disagree on n, when depth is 0, or
/// when n * D^K exceeds options.max_total_dim; DomainError when some v^l_j
/// is not unitary within 1e-10.
TruncatedDilation build_dilation(std::vector<UnitaryWitness> witnesses, std::size_t depth,
                                 const DilationOptions& options = {});

ComplexMatrix embed_J(const TruncatedDilation& dil, const ComplexMatrix& x);

/// Joint cyclic shift: block b moves to block b+1, block K to block 1.
ComplexMatrix shift_S(const TruncatedDilation& dil, const ComplexMatrix& y);
ComplexMatrix shift_S_inverse(const TruncatedDilation& dil, const ComplexMatrix& y);

/// Cyclic shift of the slot-l factors across the K blocks.
ComplexMatrix shift_slot(const TruncatedDilation& dil, std::size_t l, const ComplexMatrix& y);

ComplexMatrix apply_U(const TruncatedDilation& dil, std::size_t l, const ComplexMatrix& y);
ComplexMatrix apply_U_inverse(const TruncatedDilation& dil, std::size_t l, const ComplexMatrix& y);

ComplexMatrix expect_E(const TruncatedDilation& dil, const ComplexMatrix& y);

/// Every k with k_1 + ... + k_L <= max_total, in lexicographic order.
std::vector<MultiIndex> multi_indices(std::size_t count, std::size_t max_total);

/// max_ij ||T^k(e_ij) - E U^k J(e_ij)||_F for a single multi-index.  Valid
/// for any k; the identity is only guaranteed while sum(k) <= depth.
double index_deviation(const TruncatedDilation& dil, std::span<const SchurSymbol> symbols,
                       const MultiIndex& k);

/// Checks the power identity on the matrix-unit basis for every multi-index
/// with sum(k) <= depth, trace preservation of J, U_l and E, pairwise
/// commutation of the U_l, and the duality tr(T_M(x) y) = tau(U(J(x)) J(y)).
/// Throws DomainError when some witness Gram matrix is farther than 10 * tol
/// from its symbol.
DilationReport verify_dilation(const TruncatedDilation& dil, std::span<const SchurSymbol> symbols,
                               double tol);

}  // namespace schurdil
