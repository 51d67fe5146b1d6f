#include "cdpath/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cdpath {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kSymmetryTol = 1e-10;
constexpr double kStateNormTol = 1e-10;

std::uint64_t rotate_state(std::uint64_t s, int n) {
  const std::uint64_t mask = (n == 64) ? ~0ull : ((1ull << n) - 1);
  return ((s << 1) | (s >> (n - 1))) & mask;
}

std::uint64_t flip_state(std::uint64_t s, int n) {
  const std::uint64_t mask = (n == 64) ? ~0ull : ((1ull << n) - 1);
  return (~s) & mask;
}

// Orthonormal symmetry-adapted basis vectors, one per compatible group orbit,
// ordered by orbit representative. Group: translations (if momentum set) and
// global spin flip (if parity set); both are permutations of the z-basis.
Eigen::MatrixXcd build_sector_embedding(int n, bool periodic,
                                        std::optional<int> parity,
                                        std::optional<int> momentum) {
  const std::uint64_t dim = 1ull << n;
  const int rotations = momentum.has_value() ? n : 1;
  const int flips = parity.has_value() ? 2 : 1;
  if (momentum.has_value() && !periodic)
    throw BasisError("momentum sector requires a periodic chain");

  std::vector<char> seen(dim, 0);
  std::vector<Eigen::VectorXcd> columns;
  const double two_pi = 2.0 * std::numbers::pi;
  const int k = momentum.value_or(0);
  const double p = static_cast<double>(parity.value_or(1));

  std::vector<std::uint64_t> images;
  images.reserve(static_cast<std::size_t>(rotations) * flips);
  for (std::uint64_t rep = 0; rep < dim; ++rep) {
    if (seen[rep]) continue;
    images.clear();
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (int f = 0; f < flips; ++f) {
      std::uint64_t s = (f == 0) ? rep : flip_state(rep, n);
      for (int r = 0; r < rotations; ++r) {
        const double phase = two_pi * k * r / n;
        const Complex chi_conj =
            std::polar(1.0, phase) * ((f == 0) ? 1.0 : p);
        w(static_cast<Eigen::Index>(s)) += chi_conj;
        images.push_back(s);
        s = rotate_state(s, n);
      }
    }
    for (std::uint64_t img : images) seen[img] = 1;
    const double nrm = w.norm();
    if (nrm > 1e-8) columns.push_back(w / nrm);
  }

  Eigen::MatrixXcd embedding(static_cast<Eigen::Index>(dim),
                             static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c)
    embedding.col(static_cast<Eigen::Index>(c)) = columns[c];
  return embedding;
}

void apply_terms(const std::vector<PauliStringTerm>& terms,
                 const Eigen::VectorXcd& v, int n, Eigen::VectorXcd& out) {
  out.setZero();
  const std::uint64_t dim = 1ull << n;
  for (const auto& term : terms) {
    std::uint64_t flip_mask = 0;
    for (const auto& [site, axis] : term.sites)
      if (axis != PauliAxis::Z) flip_mask |= (1ull << site);
    for (std::uint64_t s = 0; s < dim; ++s) {
      const Complex amp = v(static_cast<Eigen::Index>(s));
      if (amp == Complex(0.0, 0.0)) continue;
      Complex phase(term.coefficient, 0.0);
      for (const auto& [site, axis] : term.sites) {
        const double sz = (s >> site) & 1ull ? -1.0 : 1.0;
        if (axis == PauliAxis::Z)
          phase *= sz;
        else if (axis == PauliAxis::Y)
          phase *= Complex(0.0, sz);
      }
      out(static_cast<Eigen::Index>(s ^ flip_mask)) += phase * amp;
    }
  }
}

void validate_terms(const std::vector<PauliStringTerm>& terms, int n) {
  for (const auto& term : terms) {
    std::uint64_t used = 0;
    for (const auto& [site, axis] : term.sites) {
      if (site < 0 || site >= n)
        throw BasisError("pauli term site " + std::to_string(site) +
                         " outside chain of length " + std::to_string(n));
      if (used & (1ull << site))
        throw BasisError("pauli term repeats site " + std::to_string(site));
      used |= (1ull << site);
    }
  }
}

}  // namespace

SpinBasis SpinBasis::full_chain(int sites, bool periodic) {
  if (sites < 1 || sites > 24) throw BasisError("unsupported chain length");
  SpinBasis b;
  b.kind_ = BasisKind::FullChain;
  b.sites_ = sites;
  b.periodic_ = periodic;
  b.dimension_ = Eigen::Index(1) << sites;
  return b;
}

SpinBasis SpinBasis::symmetric_sector(int sites, bool periodic,
                                      std::optional<int> parity,
                                      std::optional<int> momentum) {
  if (sites < 1 || sites > 24) throw BasisError("unsupported chain length");
  if (parity && *parity != 1 && *parity != -1)
    throw BasisError("parity must be +1 or -1");
  if (!parity && !momentum)
    throw BasisError("symmetric sector needs at least one quantum number");
  SpinBasis b;
  b.kind_ = BasisKind::SymmetricSector;
  b.sites_ = sites;
  b.periodic_ = periodic;
  b.parity_ = parity;
  b.momentum_ = momentum;
  auto data = std::make_shared<SectorData>();
  data->embedding = build_sector_embedding(sites, periodic, parity, momentum);
  b.dimension_ = data->embedding.cols();
  b.sector_ = std::move(data);
  return b;
}

SpinBasis SpinBasis::dicke(int sites) {
  if (sites < 1) throw BasisError("Dicke basis needs N >= 1");
  SpinBasis b;
  b.kind_ = BasisKind::Dicke;
  b.sites_ = sites;
  b.periodic_ = false;
  b.dimension_ = sites + 1;
  return b;
}

const Eigen::MatrixXcd& SpinBasis::embedding() const {
  if (kind_ != BasisKind::SymmetricSector || !sector_)
    throw BasisError("basis has no sector embedding");
  return sector_->embedding;
}

bool SpinBasis::operator==(const SpinBasis& other) const {
  return kind_ == other.kind_ && sites_ == other.sites_ &&
         periodic_ == other.periodic_ && parity_ == other.parity_ &&
         momentum_ == other.momentum_ && dimension_ == other.dimension_;
}

std::string SpinBasis::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case BasisKind::FullChain:
      os << "FullChain(N=" << sites_ << (periodic_ ? ", pbc" : ", obc") << ")";
      break;
    case BasisKind::SymmetricSector:
      os << "Sector(N=" << sites_;
      if (parity_) os << ", parity=" << *parity_;
      if (momentum_) os << ", k=" << *momentum_;
      os << ", dim=" << dimension_ << ")";
      break;
    case BasisKind::Dicke:
      os << "Dicke(N=" << sites_ << ")";
      break;
  }
  return os.str();
}

OperatorMatrix OperatorMatrix::hermitian(SpinBasis basis, MatrixXc entries) {
  if (entries.rows() != entries.cols() || entries.rows() != basis.dimension())
    throw BasisError("operator shape does not match basis dimension");
  const double scale = entries.cwiseAbs().maxCoeff();
  const double defect = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && defect > kHermitianTol * scale)
    throw BasisError("matrix flagged hermitian fails the hermiticity check");
  OperatorMatrix op;
  op.basis_ = std::move(basis);
  op.m_ = std::move(entries);
  op.hermitian_ = true;
  return op;
}

OperatorMatrix OperatorMatrix::non_hermitian(SpinBasis basis, MatrixXc entries) {
  if (entries.rows() != entries.cols() || entries.rows() != basis.dimension())
    throw BasisError("operator shape does not match basis dimension");
  OperatorMatrix op;
  op.basis_ = std::move(basis);
  op.m_ = std::move(entries);
  op.hermitian_ = false;
  return op;
}

OperatorMatrix OperatorMatrix::zero(const SpinBasis& basis) {
  return hermitian(basis, MatrixXc::Zero(basis.dimension(), basis.dimension()));
}

OperatorMatrix OperatorMatrix::identity(const SpinBasis& basis) {
  return hermitian(basis,
                   MatrixXc::Identity(basis.dimension(), basis.dimension()));
}

InnerProductWeight InnerProductWeight::trace() {
  return InnerProductWeight{WeightKind::TraceInfiniteT, std::nullopt};
}

InnerProductWeight InnerProductWeight::ground_state(StateVector psi) {
  return InnerProductWeight{WeightKind::GroundState, std::move(psi)};
}

InnerProductWeight InnerProductWeight::approximate_state(StateVector psi) {
  return InnerProductWeight{WeightKind::ApproximateState, std::move(psi)};
}

namespace detail {
std::pair<std::uint64_t, Complex> apply_pauli_string(
    const std::vector<std::pair<int, PauliAxis>>& sites, std::uint64_t state) {
  Complex phase(1.0, 0.0);
  std::uint64_t out = state;
  for (const auto& [site, axis] : sites) {
    const double sz = (state >> site) & 1ull ? -1.0 : 1.0;
    switch (axis) {
      case PauliAxis::Z:
        phase *= sz;
        break;
      case PauliAxis::X:
        out ^= (1ull << site);
        break;
      case PauliAxis::Y:
        phase *= Complex(0.0, sz);
        out ^= (1ull << site);
        break;
    }
  }
  return {out, phase};
}
}  // namespace detail

OperatorMatrix build_operator(const std::vector<PauliStringTerm>& terms,
                              const SpinBasis& basis) {
  if (basis.kind() == BasisKind::Dicke)
    throw BasisError("pauli strings are undefined in the Dicke basis");
  validate_terms(terms, basis.sites());

  const int n = basis.sites();
  if (basis.kind() == BasisKind::FullChain) {
    const std::uint64_t dim = 1ull << n;
    MatrixXc m = MatrixXc::Zero(static_cast<Eigen::Index>(dim),
                                static_cast<Eigen::Index>(dim));
    for (const auto& term : terms) {
      for (std::uint64_t s = 0; s < dim; ++s) {
        auto [img, phase] = detail::apply_pauli_string(term.sites, s);
        m(static_cast<Eigen::Index>(img), static_cast<Eigen::Index>(s)) +=
            term.coefficient * phase;
      }
    }
    return OperatorMatrix::hermitian(basis, std::move(m));
  }

  // SymmetricSector: assemble P^dag M P column by column and verify that M
  // never leaks out of the sector subspace.
  const Eigen::MatrixXcd& emb = basis.embedding();
  const Eigen::Index dim_full = emb.rows();
  const Eigen::Index dim_sec = emb.cols();
  Eigen::MatrixXcd image(dim_full, dim_sec);
  Eigen::VectorXcd out(dim_full);
  for (Eigen::Index c = 0; c < dim_sec; ++c) {
    apply_terms(terms, emb.col(c), n, out);
    image.col(c) = out;
  }
  MatrixXc sec = emb.adjoint() * image;
  const double leak = (image - emb * sec).norm();
  if (leak > kSymmetryTol * std::max(1.0, image.norm()))
    throw SymmetryError("operator does not preserve the requested sector");
  // Symmetrize away projection roundoff.
  sec = 0.5 * (sec + sec.adjoint().eval());
  return OperatorMatrix::hermitian(basis, std::move(sec));
}

CollectiveOps build_collective_ops(int sites) {
  if (sites < 1) throw BasisError("collective spin needs N >= 1");
  SpinBasis basis = SpinBasis::dicke(sites);
  const double s = sites / 2.0;
  const Eigen::Index dim = basis.dimension();
  MatrixXc sz = MatrixXc::Zero(dim, dim);
  MatrixXc sp = MatrixXc::Zero(dim, dim);  // raising operator
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double m = s - static_cast<double>(i);  // index 0 <-> m = S
    sz(i, i) = m;
    if (i + 1 < dim) {
      const double mlow = m - 1.0;
      sp(i, i + 1) = std::sqrt(s * (s + 1.0) - mlow * (mlow + 1.0));
    }
  }
  MatrixXc sx = 0.5 * (sp + sp.adjoint().eval());
  MatrixXc sy = Complex(0.0, -0.5) * (sp - sp.adjoint().eval());
  return CollectiveOps{OperatorMatrix::hermitian(basis, std::move(sx)),
                       OperatorMatrix::hermitian(basis, std::move(sy)),
                       OperatorMatrix::hermitian(basis, std::move(sz))};
}

OperatorMatrix project_to_sector(const OperatorMatrix& m,
                                 const SpinBasis& sector) {
  if (m.basis().kind() != BasisKind::FullChain)
    throw BasisError("project_to_sector expects a full-chain operator");
  if (sector.kind() != BasisKind::SymmetricSector ||
      sector.sites() != m.basis().sites())
    throw BasisError("target basis is not a sector of the same chain");
  const Eigen::MatrixXcd& emb = sector.embedding();
  const MatrixXc image = m.entries() * emb;
  MatrixXc sec = emb.adjoint() * image;
  const double leak = (image - emb * sec).norm();
  if (leak > kSymmetryTol * std::max(1.0, image.norm()))
    throw SymmetryError(
        "operator incompatible with sector: symmetry residual " +
        std::to_string(leak));
  sec = 0.5 * (sec + sec.adjoint().eval());
  return OperatorMatrix::hermitian(sector, std::move(sec));
}

StateVector lift_from_sector(const StateVector& psi, const SpinBasis& full) {
  if (psi.basis.kind() != BasisKind::SymmetricSector)
    throw BasisError("lift_from_sector expects a sector state");
  if (full.kind() != BasisKind::FullChain ||
      full.sites() != psi.basis.sites())
    throw BasisError("target basis mismatch in lift_from_sector");
  return StateVector{full, psi.basis.embedding() * psi.amplitudes};
}

double op_inner(const OperatorMatrix& a, const OperatorMatrix& b,
                const InnerProductWeight& w) {
  if (a.basis() != b.basis())
    throw BasisError("op_inner: operators live in different bases (" +
                     a.basis().describe() + " vs " + b.basis().describe() + ")");
  if (!a.is_hermitian() || !b.is_hermitian())
    throw BasisError("op_inner is defined for Hermitian operators");
  if (w.kind == WeightKind::TraceInfiniteT) {
    const Complex tr = a.entries().cwiseProduct(b.entries().conjugate()).sum();
    return tr.real() / static_cast<double>(a.dimension());
  }
  if (!w.state) throw BasisError("state-weighted inner product without state");
  const StateVector& psi = *w.state;
  if (psi.basis != a.basis())
    throw BasisError("weight state basis mismatch");
  if (std::abs(psi.norm() - 1.0) > kStateNormTol)
    throw BasisError("weight state is not normalized");
  const VectorXc ya = a.entries() * psi.amplitudes;
  const VectorXc yb = b.entries() * psi.amplitudes;
  return ya.dot(yb).real();
}

double op_norm(const OperatorMatrix& a, const InnerProductWeight& w) {
  return std::sqrt(std::max(0.0, op_inner(a, a, w)));
}

double hermiticity_defect(const MatrixXc& m) {
  return (m - m.adjoint()).norm();
}

MatrixXc parity_matrix(int sites) {
  const std::uint64_t dim = 1ull << sites;
  const std::uint64_t mask = dim - 1;
  MatrixXc p = MatrixXc::Zero(static_cast<Eigen::Index>(dim),
                              static_cast<Eigen::Index>(dim));
  for (std::uint64_t s = 0; s < dim; ++s)
    p(static_cast<Eigen::Index>((~s) & mask), static_cast<Eigen::Index>(s)) = 1.0;
  return p;
}

}  // namespace cdpath
