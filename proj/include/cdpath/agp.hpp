#pragma once

// Variational adiabatic gauge potential in Krylov operator space: the Lanczos
// construction, the coefficient recursion, action evaluation, and two
// independent oracles (direct least squares over the commutator ansatz and
// the exact spectral gauge potential).

#include <vector>

#include "cdpath/operators.hpp"

namespace cdpath {

class KrylovError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relative tolerance on b_k below which the Krylov space is declared closed.
constexpr double kLanczosTol = 1e-10;

// Output of the operator-space Lanczos recursion. The stored operators are
// the Hermitian representatives P_k = i^k O_k of the Krylov chain; they are
// orthonormal under the inner product used to build them, and the
// coefficients b_k match the recursion
//   A_k = [H, O_{k-1}] - b_{k-1} O_{k-2},  b_k = ||A_k||,  O_k = A_k / b_k,
// which in the Hermitian representation reads
//   P~_k = i[H, P_{k-1}] + b_{k-1} P_{k-2}.
struct KrylovData {
  std::vector<OperatorMatrix> operators;  // P_0 ... P_{2 ell_eff}
  std::vector<double> lanczos;            // b_0 ... (stops at closure)
  int requested_ell = 0;
  int effective_ell = 0;  // depth usable for assembly
  bool closed = false;    // recursion terminated on a vanishing norm
  OperatorMatrix h;
  OperatorMatrix dh;
  InnerProductWeight weight;
};

struct AGPSolution {
  std::vector<double> gammas;
  OperatorMatrix matrix;  // i sum_k gamma_k O_{2k-1}
  double action_value = 0.0;
  int order = 0;
};

struct ActionReport {
  double value = 0.0;
  WeightKind weight = WeightKind::TraceInfiniteT;
};

// Operator-space Lanczos, run to depth 2*ell or to closure. b_0 below
// tolerance (dH with vanishing weighted norm) yields an empty basis.
KrylovData krylov_basis(const OperatorMatrix& h, const OperatorMatrix& dh,
                        int ell, const InnerProductWeight& w);

// Solves the tridiagonal stationarity equations for the gamma coefficients:
//   A_k = b_{2k-1}^2 + b_{2k}^2, B_k = b_{2k} b_{2k+1},
//   r_{l-1} = B_{l-1}/A_l, r_{k-1} = B_{k-1}/(A_k - r_k B_k),
//   gamma_1 = -b_0 b_1 / (A_1 - r_1 B_1), gamma_{k+1} = -r_k gamma_k.
// A vanishing denominator raises KrylovError (degenerate recursion).
std::vector<double> agp_gammas(const std::vector<double>& lanczos, int ell);

// Assembles A = i sum gamma_k O_{2k-1} and fills its action value.
AGPSolution assemble_agp(const KrylovData& kry, const std::vector<double>& gammas);

// value = (G|G) with G = dH + i[A,H] under the weight.
ActionReport action_value(const OperatorMatrix& h, const OperatorMatrix& dh,
                          const OperatorMatrix& a, const InnerProductWeight& w);

// Direct minimization over the odd-commutator monomial ansatz
//   A = i sum_k alpha_k ad_H^{2k-1}(dH),
// solving the ell x ell normal equations. Verification oracle for small
// systems; falls back to a pseudoinverse (and flags it) when the normal
// matrix is singular.
struct LsqAgpResult {
  std::vector<double> alphas;
  OperatorMatrix matrix;
  bool used_pseudoinverse = false;
};
LsqAgpResult lsq_agp_oracle(const OperatorMatrix& h, const OperatorMatrix& dh,
                            int ell, const InnerProductWeight& w);

// Exact gauge potential from the spectral formula
//   <m|A|n> = -i <m|dH|n> / (E_m - E_n),  diagonal set to zero.
// Errors on a degenerate pair with nonzero coupling.
OperatorMatrix exact_agp(const OperatorMatrix& h, const OperatorMatrix& dh);

// Expansion coefficients alpha_k of a (Krylov-assembled) AGP in the monomial
// commutator basis, via the normal equations of the nested-commutator Gram
// system. Used by the frequency-fitting diagnostics.
std::vector<double> agp_monomial_coefficients(const OperatorMatrix& h,
                                              const OperatorMatrix& dh,
                                              const OperatorMatrix& agp,
                                              int ell);

}  // namespace cdpath
