#pragma once

// Finite-dimensional unitary Gram witnesses: unitaries v_1..v_n in M_d with
// (1/d) tr(v_i* v_j) = m_ij.  Finding one certifies that the unital positive
// Schur multiplier T_M is factorizable.  Only tracial algebras (M_d, tr/d)
// with d <= d_max are searched, so a NotFound result is inconclusive.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "schurdil/numcore.hpp"
#include "schurdil/schur.hpp"

namespace schurdil {

struct UnitaryWitness {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<ComplexMatrix> v;
  double residual = 0.0;  // ||gram_of(*this) - M||_F for the symbol it was built for
};

enum class StepRule { Fixed, Backtracking };

struct SearchConfig {
  std::size_t d_min = 1;
  std::size_t d_max = 8;
  std::size_t restarts = 50;
  std::size_t max_iters = 2000;
  double target_residual = 1e-8;
  std::uint64_t seed = 0;
  StepRule step_rule = StepRule::Backtracking;
  bool diagonal_only = false;
  double fixed_step = 0.05;  // used by StepRule::Fixed only
  std::size_t workers = 0;   // 0 selects default_worker_count()

  /// Throws DomainError on an inconsistent configuration.
  void validate() const;
};

struct NotFound {
  double best_residual = 0.0;
  UnitaryWitness best_witness;
};

using SearchResult = std::variant<UnitaryWitness, NotFound>;

struct WitnessReport {
  double unitarity_defect = 0.0;
  double residual = 0.0;
  bool pass = false;
};

/// Worker count from SCHURDIL_WORKERS, falling back to the hardware
/// concurrency (at least 1).
std::size_t default_worker_count();

/// G_ij = (1/d) tr(v_i* v_j).
ComplexMatrix gram_of(const UnitaryWitness& w);

/// ||gram_of(w) - M||_F.
double residual(const UnitaryWitness& w, const SchurSymbol& symbol);

/// Riemannian gradient descent on U(d)^n over d = d_min..d_max, with v_1
/// pinned to the identity.  Returns the first witness reaching
/// cfg.target_residual (smallest d, then lowest restart index).
/// Throws InvalidSymbolError unless the symbol is Hermitian PSD unit-diagonal.
SearchResult search_witness(const SchurSymbol& symbol, const SearchConfig& cfg);

/// Same contract, restricted to diagonal unitaries (phases on the d-torus).
SearchResult diagonal_witness_search(const SchurSymbol& symbol, const SearchConfig& cfg);

/// v_i = diag(w^{i*0}, ..., w^{i*(n-1)}), w = exp(2 pi i / n); Gram matrix I_n.
UnitaryWitness fourier_witness(std::size_t n);

/// Block-diagonal combination v_i (+) w_i of two witnesses of the same n.
/// Its Gram matrix is (d_a G_a + d_b G_b) / (d_a + d_b).
UnitaryWitness direct_sum(const UnitaryWitness& a, const UnitaryWitness& b);

/// Independent re-check.  unitarity_defect is max_i ||v_i - polar(v_i)||_F,
/// the Frobenius distance of each v_i to the nearest unitary.  Passing is
/// strict: both quantities must be < tol.
WitnessReport verify_witness(const UnitaryWitness& w, const SchurSymbol& symbol, double tol);

namespace detail {

/// f(v) = ||G(v) - M||_F^2.  When egrad is non-null it receives the Euclidean
/// gradient with respect to the real inner product Re tr(A* B).
double unitary_objective(std::span<const ComplexMatrix> v, const ComplexMatrix& m,
                         std::vector<ComplexMatrix>* egrad);

/// v_k skew(v_k* egrad_k); the first factor is pinned and gets a zero gradient.
std::vector<ComplexMatrix> riemannian_gradient(std::span<const ComplexMatrix> v,
                                               std::span<const ComplexMatrix> egrad);

/// Objective over phases theta (n x d): z_ik = exp(i theta_ik), v_i = diag(z_i).
/// Row 0 is pinned and gets a zero gradient.
double phase_objective(const Eigen::MatrixXd& theta, const ComplexMatrix& m,
                       Eigen::MatrixXd* grad);

}  // namespace detail

}  // namespace schurdil
