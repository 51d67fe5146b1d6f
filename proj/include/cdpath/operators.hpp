#pragma once

// Finite-dimensional spin operators, symmetry sectors and operator inner
// products. Everything downstream (models, AGP construction, dynamics) is
// built on the types defined here.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cdpath {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

class BasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SymmetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BasisKind { FullChain, SymmetricSector, Dicke };

enum class PauliAxis : std::uint8_t { X, Y, Z };

// Symmetry-adapted basis data for a SymmetricSector: orthonormal columns of
// the embedding P (full dimension x sector dimension), built deterministically
// from orbit representatives in increasing state order.
struct SectorData {
  Eigen::MatrixXcd embedding;  // columns: sector basis vectors in the z-basis
};

class SpinBasis {
 public:
  static SpinBasis full_chain(int sites, bool periodic);
  // Symmetry sector of a chain. `parity` restricts to the +/-1 eigenspace of
  // the global spin flip (product of sigma^x); `momentum` to the given
  // translation eigenvalue exp(-2 pi i k / N) (periodic chains only).
  static SpinBasis symmetric_sector(int sites, bool periodic,
                                    std::optional<int> parity,
                                    std::optional<int> momentum);
  static SpinBasis dicke(int sites);

  BasisKind kind() const { return kind_; }
  int sites() const { return sites_; }
  bool periodic() const { return periodic_; }
  std::optional<int> parity() const { return parity_; }
  std::optional<int> momentum() const { return momentum_; }
  Eigen::Index dimension() const { return dimension_; }

  // Sector embedding P with orthonormal columns; only for SymmetricSector.
  const Eigen::MatrixXcd& embedding() const;

  bool operator==(const SpinBasis& other) const;
  bool operator!=(const SpinBasis& other) const { return !(*this == other); }

  std::string describe() const;

  SpinBasis() = default;  // empty placeholder; use the factories

 private:
  BasisKind kind_ = BasisKind::FullChain;
  int sites_ = 0;
  bool periodic_ = true;
  std::optional<int> parity_;
  std::optional<int> momentum_;
  Eigen::Index dimension_ = 0;
  std::shared_ptr<const SectorData> sector_;
};

// Dense operator tagged with its basis. Hermitian unless constructed through
// the non-Hermitian escape hatch (used for unitaries in the Floquet module).
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  // Checks Hermiticity: max |M - M^dag| <= 1e-12 * max |M|.
  static OperatorMatrix hermitian(SpinBasis basis, MatrixXc entries);
  static OperatorMatrix non_hermitian(SpinBasis basis, MatrixXc entries);
  static OperatorMatrix zero(const SpinBasis& basis);
  static OperatorMatrix identity(const SpinBasis& basis);

  const SpinBasis& basis() const { return basis_; }
  const MatrixXc& entries() const { return m_; }
  bool is_hermitian() const { return hermitian_; }
  Eigen::Index dimension() const { return m_.rows(); }

 private:
  SpinBasis basis_;
  MatrixXc m_;
  bool hermitian_ = false;
};

struct StateVector {
  SpinBasis basis;
  VectorXc amplitudes;

  double norm() const { return amplitudes.norm(); }
};

// One Pauli string: product of single-site Paulis on distinct sites.
struct PauliStringTerm {
  std::vector<std::pair<int, PauliAxis>> sites;
  double coefficient = 0.0;
};

enum class WeightKind { TraceInfiniteT, GroundState, ApproximateState };

// Inner-product weight for the variational action. State-weighted kinds use
// the symmetrized form Re <psi|{A,B}/2|psi>.
struct InnerProductWeight {
  WeightKind kind = WeightKind::TraceInfiniteT;
  std::optional<StateVector> state;

  static InnerProductWeight trace();
  static InnerProductWeight ground_state(StateVector psi);
  static InnerProductWeight approximate_state(StateVector psi);
};

// Sum of Pauli strings as a dense matrix in `basis`. For a SymmetricSector the
// operator is built directly in the sector basis; terms that do not preserve
// the sector raise SymmetryError.
OperatorMatrix build_operator(const std::vector<PauliStringTerm>& terms,
                              const SpinBasis& basis);

// Collective spin components in the Dicke basis, Sz = diag(S, S-1, ..., -S).
struct CollectiveOps {
  OperatorMatrix sx, sy, sz;
};
CollectiveOps build_collective_ops(int sites);

// Restriction P^dag M P of a full-chain operator to a symmetry sector. Errors
// if M fails to commute with the sector projector within 1e-10.
OperatorMatrix project_to_sector(const OperatorMatrix& m, const SpinBasis& sector);

// Lift a sector state back to the full-chain basis: psi_full = P psi.
StateVector lift_from_sector(const StateVector& psi, const SpinBasis& full);

// Weighted operator inner product between Hermitian operators:
//   trace kind:  Re Tr(A B) / dim
//   state kinds: Re <psi|(AB + BA)/2|psi>
// Induces the seminorm used by the Lanczos construction.
double op_inner(const OperatorMatrix& a, const OperatorMatrix& b,
                const InnerProductWeight& w);

double op_norm(const OperatorMatrix& a, const InnerProductWeight& w);

// Frobenius norm of M - M^dag; cheap Hermiticity residual used in checks.
double hermiticity_defect(const MatrixXc& m);

// Global spin-flip parity operator (product of sigma^x over all sites) in the
// full-chain z-basis.
MatrixXc parity_matrix(int sites);

namespace detail {
// Apply one Pauli string to a computational z-basis state. Returns the image
// state index and accumulates the phase. Bit j of the index is spin j,
// bit 0 -> sigma^z = +1.
std::pair<std::uint64_t, Complex> apply_pauli_string(
    const std::vector<std::pair<int, PauliAxis>>& sites, std::uint64_t state);
}  // namespace detail

}  // namespace cdpath
