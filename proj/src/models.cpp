#include "cdpath/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace cdpath {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::pair<int, int>> ring_bonds(int n, bool periodic) {
  std::set<std::pair<int, int>> bonds;
  const int last = periodic ? n : n - 1;
  for (int i = 0; i < last; ++i) {
    int a = i, b = (i + 1) % n;
    if (a > b) std::swap(a, b);
    bonds.insert({a, b});
  }
  return {bonds.begin(), bonds.end()};
}

std::vector<PauliStringTerm> transverse_field_terms(int n, double coeff) {
  std::vector<PauliStringTerm> terms;
  for (int i = 0; i < n; ++i)
    terms.push_back({{{i, PauliAxis::X}}, coeff});
  return terms;
}

OperatorMatrix hermitian_part(const SpinBasis& basis, const MatrixXc& m) {
  return OperatorMatrix::hermitian(basis, 0.5 * (m + m.adjoint().eval()));
}

// Columns spanning the +1 eigenspace of the global spin flip in the given
// basis; used to resolve degenerate ferromagnetic ground states.
MatrixXc even_basis_columns(const SpinBasis& basis) {
  const Eigen::Index dim = basis.dimension();
  if (basis.kind() == BasisKind::FullChain) {
    const int n = basis.sites();
    const std::uint64_t full = (1ull << n) - 1;
    std::vector<Eigen::VectorXcd> cols;
    for (std::uint64_t s = 0; s <= full; ++s) {
      const std::uint64_t f = (~s) & full;
      if (f < s) continue;
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
      if (f == s) {
        v(static_cast<Eigen::Index>(s)) = 1.0;
      } else {
        v(static_cast<Eigen::Index>(s)) = std::numbers::sqrt2 / 2.0;
        v(static_cast<Eigen::Index>(f)) = std::numbers::sqrt2 / 2.0;
      }
      cols.push_back(std::move(v));
    }
    MatrixXc out(dim, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      out.col(static_cast<Eigen::Index>(c)) = cols[c];
    return out;
  }
  if (basis.kind() == BasisKind::Dicke) {
    // Spin flip maps |m> to |-m>, i.e. reverses the Dicke index.
    std::vector<Eigen::VectorXcd> cols;
    for (Eigen::Index i = 0; 2 * i <= dim - 1; ++i) {
      const Eigen::Index j = dim - 1 - i;
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
      if (i == j) {
        v(i) = 1.0;
      } else {
        v(i) = std::numbers::sqrt2 / 2.0;
        v(j) = std::numbers::sqrt2 / 2.0;
      }
      cols.push_back(std::move(v));
    }
    MatrixXc out(dim, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      out.col(static_cast<Eigen::Index>(c)) = cols[c];
    return out;
  }
  // Symmetric sector: if parity is already resolved the whole space is even
  // (or nothing is, for odd parity). Otherwise restrict the induced flip.
  if (basis.parity().has_value()) {
    if (*basis.parity() == 1) return MatrixXc::Identity(dim, dim);
    throw BasisError("even restriction requested in an odd-parity sector");
  }
  const Eigen::MatrixXcd& emb = basis.embedding();
  const int n = basis.sites();
  const std::uint64_t full = (1ull << n) - 1;
  Eigen::MatrixXcd flipped(emb.rows(), emb.cols());
  for (Eigen::Index r = 0; r < emb.rows(); ++r)
    flipped.row(static_cast<Eigen::Index>((~static_cast<std::uint64_t>(r)) &
                                          full)) = emb.row(r);
  MatrixXc flip_sec = emb.adjoint() * flipped;
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(0.5 *
                                             (flip_sec + flip_sec.adjoint()));
  Eigen::Index n_even = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (es.eigenvalues()(i) > 0.0) ++n_even;
  MatrixXc out(dim, n_even);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (es.eigenvalues()(i) > 0.0) out.col(c++) = es.eigenvectors().col(i);
  return out;
}

void fix_phase(VectorXc& v) {
  Eigen::Index best = 0;
  double best_abs = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best_abs + 1e-12) {
      best_abs = a;
      best = i;
    }
  }
  const Complex z = v(best);
  if (std::abs(z) > 0.0) v *= std::conj(z) / std::abs(z);
}

bool parity_symmetric(const ModelSpec& spec) {
  return spec.kind != ModelKind::Ltfim || spec.h_z == 0.0;
}

}  // namespace

SchedulePoint lambda_schedule(double t, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("schedule requires tau > 0");
  if (t < -1e-12 * tau || t > tau * (1.0 + 1e-12))
    throw std::invalid_argument("time outside [0, tau]");
  t = std::clamp(t, 0.0, tau);
  const double inner = std::sin(kPi * t / (2.0 * tau));
  const double u = inner * inner;
  const double s = std::sin(kPi * u / 2.0);
  const double lambda = s * s;
  const double lambda_dot = (kPi * kPi / (4.0 * tau)) * std::sin(kPi * u) *
                            std::sin(kPi * t / tau);
  return {lambda, lambda_dot};
}

double ControlTerm::profile(double lambda) const {
  double f = 0.0;
  for (std::size_t k = 0; k < harmonics.size(); ++k)
    f += harmonics[k] * std::sin((k + 1) * kPi * lambda);
  return f;
}

double ControlTerm::profile_derivative(double lambda) const {
  double f = 0.0;
  for (std::size_t k = 0; k < harmonics.size(); ++k)
    f += harmonics[k] * (k + 1) * kPi * std::cos((k + 1) * kPi * lambda);
  return f;
}

OperatorMatrix annealing_hamiltonian(double lambda, const AnnealingProblem& p) {
  if (lambda < -1e-12 || lambda > 1.0 + 1e-12)
    throw std::invalid_argument("lambda outside [0, 1]");
  return OperatorMatrix::hermitian(
      p.basis(), lambda * p.h0.entries() + (1.0 - lambda) * p.h1.entries());
}

OperatorMatrix augmented_hamiltonian(double lambda, const AnnealingProblem& p) {
  MatrixXc m = annealing_hamiltonian(lambda, p).entries();
  for (const auto& c : p.controls) {
    if (c.op.basis() != p.basis())
      throw BasisError("control operator basis mismatch");
    m += c.profile(lambda) * c.op.entries();
  }
  return OperatorMatrix::hermitian(p.basis(), std::move(m));
}

OperatorMatrix augmented_hamiltonian_derivative(double lambda,
                                                const AnnealingProblem& p) {
  MatrixXc m = p.h0.entries() - p.h1.entries();
  for (const auto& c : p.controls) {
    if (c.op.basis() != p.basis())
      throw BasisError("control operator basis mismatch");
    m += c.profile_derivative(lambda) * c.op.entries();
  }
  return OperatorMatrix::hermitian(p.basis(), std::move(m));
}

PathOperators path_operators(const AnnealingProblem& p) {
  PathOperators path;
  path.ops.push_back(&p.h0);
  path.ops.push_back(&p.h1);
  for (const auto& c : p.controls) path.ops.push_back(&c.op);
  const AnnealingProblem* prob = &p;
  path.coefficients = [prob](double lambda, std::span<double> c,
                             std::span<double> cdot) {
    c[0] = lambda;
    c[1] = 1.0 - lambda;
    cdot[0] = 1.0;
    cdot[1] = -1.0;
    for (std::size_t n = 0; n < prob->controls.size(); ++n) {
      c[2 + n] = prob->controls[n].profile(lambda);
      cdot[2 + n] = prob->controls[n].profile_derivative(lambda);
    }
  };
  return path;
}

std::pair<OperatorMatrix, OperatorMatrix> commutator_controls(
    const OperatorMatrix& h0, const OperatorMatrix& h1) {
  if (h0.basis() != h1.basis())
    throw BasisError("commutator controls need a common basis");
  const MatrixXc inner = h1.entries() * h0.entries() - h0.entries() * h1.entries();
  const MatrixXc c1 = h0.entries() * inner - inner * h0.entries();
  const MatrixXc c2 = h1.entries() * inner - inner * h1.entries();
  return {hermitian_part(h0.basis(), c1), hermitian_part(h0.basis(), c2)};
}

OperatorMatrix first_commutator(const OperatorMatrix& h0,
                                const OperatorMatrix& h1) {
  if (h0.basis() != h1.basis())
    throw BasisError("first_commutator needs a common basis");
  const MatrixXc c =
      Complex(0.0, 1.0) *
      (h1.entries() * h0.entries() - h0.entries() * h1.entries());
  return hermitian_part(h0.basis(), c);
}

OperatorMatrix control_yy(const SpinBasis& basis) {
  std::vector<PauliStringTerm> terms;
  for (const auto& [a, b] : ring_bonds(basis.sites(), basis.periodic()))
    terms.push_back({{{a, PauliAxis::Y}, {b, PauliAxis::Y}}, 1.0});
  return build_operator(terms, basis);
}

OperatorMatrix control_zxz(const SpinBasis& basis) {
  const int n = basis.sites();
  if (n < 3) throw BasisError("ZXZ control needs at least 3 sites");
  std::vector<PauliStringTerm> terms;
  const int last = basis.periodic() ? n : n - 2;
  for (int j = 0; j < last; ++j)
    terms.push_back({{{j, PauliAxis::Z},
                      {(j + 1) % n, PauliAxis::X},
                      {(j + 2) % n, PauliAxis::Z}},
                     1.0});
  return build_operator(terms, basis);
}

std::pair<double, StateVector> ground_state(const OperatorMatrix& h) {
  if (!h.is_hermitian()) throw BasisError("ground_state needs a Hermitian operator");
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h.entries());
  VectorXc v = es.eigenvectors().col(0);
  fix_phase(v);
  return {es.eigenvalues()(0), StateVector{h.basis(), std::move(v)}};
}

std::pair<double, StateVector> even_sector_ground_state(const OperatorMatrix& h) {
  const MatrixXc v = even_basis_columns(h.basis());
  const MatrixXc image = h.entries() * v;
  const MatrixXc hr = v.adjoint() * image;
  if ((image - v * hr).norm() > 1e-8 * std::max(1.0, image.norm()))
    throw SymmetryError("operator does not preserve the even spin-flip sector");
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(0.5 * (hr + hr.adjoint()));
  VectorXc lifted = v * es.eigenvectors().col(0);
  fix_phase(lifted);
  return {es.eigenvalues()(0), StateVector{h.basis(), std::move(lifted)}};
}

AnnealingProblem make_model(const ModelSpec& spec) {
  const int n = spec.sites;
  if (spec.kind == ModelKind::CollectiveSpin) {
    if (n < 1) throw BasisError("collective spin needs N >= 1");
    auto ops = build_collective_ops(n);
    const double s = n / 2.0;
    const double scale = 1.0 / std::sqrt(s * (s + 1.0));
    OperatorMatrix h0 = OperatorMatrix::hermitian(
        ops.sz.basis(),
        (-scale * (ops.sz.entries() * ops.sz.entries())).eval());
    OperatorMatrix h1 =
        OperatorMatrix::hermitian(ops.sx.basis(), (-ops.sx.entries()).eval());
    auto [e1, initial] = ground_state(h1);
    auto [e0, target] = even_sector_ground_state(h0);
    (void)e1;
    (void)e0;
    return AnnealingProblem{std::move(h0), std::move(h1), {}, spec.schedule,
                            std::move(initial), std::move(target)};
  }

  if (n < 2) throw BasisError("chain models need N >= 2");
  if (spec.kind == ModelKind::LongRangeIsing) {
    if (spec.alpha < 0.0) throw BasisError("long-range exponent must be >= 0");
    if (!spec.periodic)
      throw BasisError("long-range model is defined on the ring metric");
  }

  SpinBasis basis = SpinBasis::full_chain(n, spec.periodic);
  if (spec.sector == SectorMode::Symmetric) {
    const std::optional<int> parity =
        parity_symmetric(spec) ? std::optional<int>(1) : std::nullopt;
    const std::optional<int> momentum =
        spec.periodic ? std::optional<int>(0) : std::nullopt;
    if (parity || momentum)
      basis = SpinBasis::symmetric_sector(n, spec.periodic, parity, momentum);
  }

  std::vector<PauliStringTerm> h0_terms;
  switch (spec.kind) {
    case ModelKind::ShortRangeIsing:
      for (const auto& [a, b] : ring_bonds(n, spec.periodic))
        h0_terms.push_back({{{a, PauliAxis::Z}, {b, PauliAxis::Z}}, -1.0});
      break;
    case ModelKind::Ltfim:
      for (const auto& [a, b] : ring_bonds(n, spec.periodic))
        h0_terms.push_back({{{a, PauliAxis::Z}, {b, PauliAxis::Z}}, -1.0});
      for (int i = 0; i < n; ++i) {
        if (spec.h_z != 0.0)
          h0_terms.push_back({{{i, PauliAxis::Z}}, -spec.h_z});
        if (spec.h_x != 0.0)
          h0_terms.push_back({{{i, PauliAxis::X}}, -spec.h_x});
      }
      break;
    case ModelKind::LongRangeIsing:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const int d = std::min(j - i, n - (j - i));
          h0_terms.push_back({{{i, PauliAxis::Z}, {j, PauliAxis::Z}},
                              -std::pow(static_cast<double>(d), -spec.alpha)});
        }
      break;
    case ModelKind::CollectiveSpin:
      break;  // handled above
  }

  OperatorMatrix h0 = build_operator(h0_terms, basis);
  OperatorMatrix h1 = build_operator(transverse_field_terms(n, -1.0), basis);
  auto [e1, initial] = ground_state(h1);
  (void)e1;
  StateVector target = parity_symmetric(spec)
                           ? even_sector_ground_state(h0).second
                           : ground_state(h0).second;
  return AnnealingProblem{std::move(h0), std::move(h1), {}, spec.schedule,
                          std::move(initial), std::move(target)};
}

}  // namespace cdpath
