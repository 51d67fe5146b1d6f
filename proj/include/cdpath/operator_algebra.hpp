#pragma once

// Precomputed nested-commutator algebra for fast per-lambda AGP construction.
//
// The augmented Hamiltonian is a lambda-dependent combination of a fixed set
// of generators, H~(lambda) = sum_a c_a(lambda) K_a, so every Krylov operator
// at every lambda lives in the span of nested commutators of the K_a. That
// span is orthonormalized once (trace inner product) into a Hermitian basis
// W_j; commutation with each generator becomes a small real matrix
//   (ad_a)_{jk} = (W_j | i[K_a, W_k]),
// and the per-lambda Lanczos recursion runs entirely in coefficient space.
//
// Internals work in a real representation: a Hermitian X = S + iA (S real
// symmetric, A real antisymmetric) is stored as the real matrix R = S + A.
// The trace form becomes the Euclidean dot, Tr(X Y)/d = <R_X, R_Y>/d, and
// i[K, X] maps to [K, R^T] for real-symmetric generators K. Every model this
// toolkit builds (k = 0 sectors, Dicke) has real-symmetric generators; the
// constructor rejects anything else.

#include <memory>

#include "cdpath/models.hpp"
#include "cdpath/operators.hpp"

namespace cdpath {

struct EngineAgp {
  std::vector<double> lanczos;   // b_0 ...
  std::vector<double> gammas;
  Eigen::VectorXd coords;        // AGP coordinates in the W basis
  int effective_ell = 0;
  bool closed = false;
  // Set when the gamma recursion hit a singular denominator and the
  // stationarity system was solved by pseudoinverse instead (flat directions
  // of a seminorm-degenerate chain get zero weight).
  bool degenerate_recursion = false;
  // Set when the assembly depth was lowered because the deepest coefficients
  // exceeded the physical cap (chain direction barely above termination).
  bool depth_reduced = false;
  double action = 0.0;           // (G|G) of the assembled AGP
};

class CommutatorAlgebra {
 public:
  // Builds the commutator span of the path generators to nesting depth
  // 2*max_ell (enough for an order-max_ell AGP and its action).
  CommutatorAlgebra(const PathOperators& path, int max_ell);

  int dimension() const { return static_cast<int>(basis_count_); }
  int max_ell() const { return max_ell_; }
  const SpinBasis& basis() const { return spin_basis_; }

  // Lanczos + gamma recursion + assembly at one lambda. Trace weight, or a
  // state weight when psi is given (symmetrized form, matching op_inner).
  EngineAgp agp(double lambda, int ell) const;
  EngineAgp agp(double lambda, int ell, const VectorXc& psi) const;

  // Dense matrix of an operator given by coordinates in the W basis.
  MatrixXc materialize(const Eigen::VectorXd& coords) const;

  // Frobenius norm of the operator with the given coordinates.
  double frobenius_norm(const Eigen::VectorXd& coords) const;

 private:
  EngineAgp agp_impl(double lambda, int ell, const VectorXc* psi) const;
  Eigen::MatrixXd real_rep(const MatrixXc& m) const;

  SpinBasis spin_basis_;
  Eigen::Index dim_ = 0;         // Hilbert-space dimension d
  Eigen::Index basis_count_ = 0; // algebra dimension m
  int max_ell_ = 0;
  std::size_t n_gen_ = 0;
  std::vector<Eigen::MatrixXd> gen_real_;  // generators (real symmetric)
  // Column j of w_flat_ is vec(R_j); basis orthonormal under <.,.>/d.
  Eigen::MatrixXd w_flat_;
  std::vector<Eigen::MatrixXd> ad_;          // one m x m block per generator
  std::vector<Eigen::VectorXd> gen_coords_;  // K_a in the W basis
  std::function<void(double, std::span<double>, std::span<double>)> coeffs_;
};

}  // namespace cdpath
