#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cdpath/dynamics.hpp"
#include "cdpath/models.hpp"

using namespace cdpath;

namespace {

ModelSpec short_range(int n) {
  ModelSpec spec;
  spec.kind = ModelKind::ShortRangeIsing;
  spec.sites = n;
  return spec;
}

OperatorMatrix random_hermitian(const SpinBasis& basis, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  MatrixXc m(basis.dimension(), basis.dimension());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = Complex(dist(rng), dist(rng));
  return OperatorMatrix::hermitian(basis, 0.5 * (m + m.adjoint().eval()));
}

}  // namespace

TEST_CASE("lambda schedule boundary values and midpoint") {
  const double tau = 2.7;
  const auto p0 = lambda_schedule(0.0, tau);
  CHECK(p0.lambda == doctest::Approx(0.0));
  CHECK(p0.lambda_dot == doctest::Approx(0.0));
  const auto p1 = lambda_schedule(tau, tau);
  CHECK(p1.lambda == doctest::Approx(1.0));
  CHECK(std::abs(p1.lambda_dot) < 1e-12);
  const auto pm = lambda_schedule(0.5 * tau, tau);
  CHECK(pm.lambda == doctest::Approx(0.5));
  const double pi = std::numbers::pi;
  CHECK(pm.lambda_dot == doctest::Approx(pi * pi / (4.0 * tau)));
  // central finite difference oracle
  const double h = 1e-6 * tau;
  for (double t : {0.3 * tau, 0.5 * tau, 0.8 * tau}) {
    const double fd = (lambda_schedule(t + h, tau).lambda -
                       lambda_schedule(t - h, tau).lambda) /
                      (2.0 * h);
    CHECK(lambda_schedule(t, tau).lambda_dot == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK_THROWS(lambda_schedule(-0.1, tau));
  CHECK_THROWS(lambda_schedule(1.1 * tau, tau));
}

TEST_CASE("annealing hamiltonian endpoints and midpoint spectrum") {
  AnnealingProblem p = make_model(short_range(4));
  CHECK((annealing_hamiltonian(0.0, p).entries() - p.h1.entries())
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK((annealing_hamiltonian(1.0, p).entries() - p.h0.entries())
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  // ground energy at lambda = 0.5 against the full 16x16 eigensolve
  ModelSpec full_spec = short_range(4);
  full_spec.sector = SectorMode::Full;
  AnnealingProblem full = make_model(full_spec);
  Eigen::SelfAdjointEigenSolver<MatrixXc> es_full(
      annealing_hamiltonian(0.5, full).entries());
  Eigen::SelfAdjointEigenSolver<MatrixXc> es_sec(
      annealing_hamiltonian(0.5, p).entries());
  CHECK(es_sec.eigenvalues()(0) ==
        doctest::Approx(es_full.eigenvalues()(0)).epsilon(1e-12));
}

TEST_CASE("augmented hamiltonian control profiles") {
  AnnealingProblem p = make_model(short_range(4));
  ControlTerm yy{control_yy(p.basis()), {2.0}};
  p.controls.push_back(yy);

  SUBCASE("profiles vanish at the endpoints for any amplitudes") {
    CHECK((augmented_hamiltonian(0.0, p).entries() - p.h1.entries())
              .cwiseAbs()
              .maxCoeff() < 1e-13);
    CHECK((augmented_hamiltonian(1.0, p).entries() - p.h0.entries())
              .cwiseAbs()
              .maxCoeff() < 1e-13);
  }
  SUBCASE("single harmonic at the midpoint") {
    const MatrixXc expected =
        annealing_hamiltonian(0.5, p).entries() + 2.0 * yy.op.entries();
    CHECK((augmented_hamiltonian(0.5, p).entries() - expected)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
  SUBCASE("two harmonics evaluate the sine series") {
    p.controls[0].harmonics = {1.0, 0.5};
    const double coeff = 1.0 * std::sin(std::numbers::pi * 0.25) +
                         0.5 * std::sin(std::numbers::pi * 0.5);
    CHECK(coeff == doctest::Approx(std::sqrt(0.5) + 0.5));
    const MatrixXc expected =
        annealing_hamiltonian(0.25, p).entries() + coeff * yy.op.entries();
    CHECK((augmented_hamiltonian(0.25, p).entries() - expected)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("short range model at N=2 targets the GHZ state") {
  AnnealingProblem p = make_model(short_range(2));
  const StateVector full = lift_from_sector(p.target, SpinBasis::full_chain(2, true));
  CHECK(std::abs(full.amplitudes(0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(full.amplitudes(3)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(full.amplitudes(1)) < 1e-12);
  CHECK(std::abs(full.amplitudes(2)) < 1e-12);
}

TEST_CASE("long range couplings follow the ring power law") {
  ModelSpec spec;
  spec.kind = ModelKind::LongRangeIsing;
  spec.sites = 5;
  spec.alpha = 1.7;
  spec.sector = SectorMode::Full;
  AnnealingProblem p = make_model(spec);
  const SpinBasis& basis = p.basis();
  const OperatorMatrix z0z2 = build_operator(
      {{{{0, PauliAxis::Z}, {2, PauliAxis::Z}}, 1.0}}, basis);
  const double coupling = op_inner(p.h0, z0z2, InnerProductWeight::trace());
  CHECK(coupling == doctest::Approx(-std::pow(2.0, -1.7)).epsilon(1e-12));
  CHECK_THROWS([&] {
    ModelSpec bad = spec;
    bad.alpha = -1.0;
    make_model(bad);
  }());
}

TEST_CASE("collective spin model diagonal") {
  ModelSpec spec;
  spec.kind = ModelKind::CollectiveSpin;
  spec.sites = 4;
  AnnealingProblem p = make_model(spec);
  for (int i = 0; i <= 4; ++i) {
    const double m = 2.0 - i;
    CHECK(p.h0.entries()(i, i).real() ==
          doctest::Approx(-m * m / std::sqrt(6.0)).epsilon(1e-12));
  }
  // even-sector GHZ target: equal weight on m = +-S
  CHECK(std::abs(p.target.amplitudes(0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(p.target.amplitudes(4)) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("commutator controls") {
  SUBCASE("vanish for commuting inputs") {
    AnnealingProblem p = make_model(short_range(3));
    auto [c1, c2] = commutator_controls(p.h0, p.h0);
    CHECK(c1.entries().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(c2.entries().cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("hermitian on random pairs") {
    std::mt19937 rng(11);
    const SpinBasis basis = SpinBasis::full_chain(3, true);
    const OperatorMatrix a = random_hermitian(basis, rng);
    const OperatorMatrix b = random_hermitian(basis, rng);
    auto [c1, c2] = commutator_controls(a, b);
    CHECK(hermiticity_defect(c1.entries()) < 1e-12);
    CHECK(hermiticity_defect(c2.entries()) < 1e-12);
  }
  SUBCASE("short-range content includes yy and excludes the z field") {
    ModelSpec spec = short_range(4);
    spec.sector = SectorMode::Full;
    AnnealingProblem p = make_model(spec);
    auto [c1, c2] = commutator_controls(p.h0, p.h1);
    const OperatorMatrix yy = control_yy(p.basis());
    std::vector<PauliStringTerm> zsum;
    for (int i = 0; i < 4; ++i) zsum.push_back({{{i, PauliAxis::Z}}, 1.0});
    const OperatorMatrix z = build_operator(zsum, p.basis());
    const auto tr = InnerProductWeight::trace();
    CHECK(std::abs(op_inner(c2, yy, tr)) > 1e-6);
    CHECK(std::abs(op_inner(c2, z, tr)) < 1e-12);
    // traceless for the Ising models
    CHECK(std::abs(c1.entries().trace()) < 1e-10);
    CHECK(std::abs(c2.entries().trace()) < 1e-10);
  }
}

TEST_CASE("commutator controls span the named controls modulo H0 and H1") {
  ModelSpec spec = short_range(6);
  spec.sector = SectorMode::Full;
  AnnealingProblem p = make_model(spec);
  auto [c1, c2] = commutator_controls(p.h0, p.h1);
  const OperatorMatrix yy = control_yy(p.basis());
  const OperatorMatrix zxz = control_zxz(p.basis());
  // Hc1 = -8 H1 + 8 ZXZ and Hc2 = 8 H0 + 8 YY on the periodic chain.
  const MatrixXc r1 =
      c1.entries() + 8.0 * p.h1.entries() - 8.0 * zxz.entries();
  const MatrixXc r2 = c2.entries() - 8.0 * p.h0.entries() - 8.0 * yy.entries();
  CHECK(r1.norm() < 1e-10 * c1.entries().norm());
  CHECK(r2.norm() < 1e-10 * c2.entries().norm());
}

TEST_CASE("first commutator") {
  SUBCASE("pauli algebra oracle at N=3") {
    ModelSpec spec = short_range(3);
    spec.sector = SectorMode::Full;
    AnnealingProblem p = make_model(spec);
    const OperatorMatrix lhs = first_commutator(p.h0, p.h1);
    std::vector<PauliStringTerm> terms;
    for (int j = 0; j < 3; ++j) {
      terms.push_back({{{j, PauliAxis::Y}, {(j + 1) % 3, PauliAxis::Z}}, 2.0});
      terms.push_back({{{j, PauliAxis::Z}, {(j + 1) % 3, PauliAxis::Y}}, 2.0});
    }
    const OperatorMatrix rhs = build_operator(terms, p.basis());
    CHECK((lhs.entries() - rhs.entries()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("commuting inputs give zero") {
    AnnealingProblem p = make_model(short_range(3));
    const OperatorMatrix c = first_commutator(p.h1, p.h1);
    CHECK(c.entries().cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("purely imaginary entries for real symmetric generators") {
    ModelSpec spec = short_range(3);
    spec.sector = SectorMode::Full;
    AnnealingProblem p = make_model(spec);
    const OperatorMatrix c = first_commutator(p.h0, p.h1);
    CHECK(c.entries().real().cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("parity symmetry of the model families") {
  SUBCASE("short and long range conserve parity, controls too") {
    for (ModelKind kind : {ModelKind::ShortRangeIsing, ModelKind::LongRangeIsing}) {
      ModelSpec spec;
      spec.kind = kind;
      spec.sites = 4;
      spec.sector = SectorMode::Full;
      AnnealingProblem p = make_model(spec);
      const MatrixXc parity = parity_matrix(4);
      const MatrixXc h = annealing_hamiltonian(0.37, p).entries();
      CHECK((h * parity - parity * h).cwiseAbs().maxCoeff() < 1e-12);
      auto [c1, c2] = commutator_controls(p.h0, p.h1);
      for (const auto& c : {c1, c2})
        CHECK((c.entries() * parity - parity * c.entries()).cwiseAbs().maxCoeff() <
              1e-10);
    }
  }
  SUBCASE("longitudinal field breaks parity") {
    ModelSpec spec;
    spec.kind = ModelKind::Ltfim;
    spec.sites = 4;
    spec.h_x = 0.7;
    spec.h_z = 0.01;
    spec.sector = SectorMode::Full;
    AnnealingProblem p = make_model(spec);
    const MatrixXc parity = parity_matrix(4);
    CHECK((p.h0.entries() * parity - parity * p.h0.entries()).cwiseAbs().maxCoeff() >
          1e-3);
  }
}

TEST_CASE("fully connected limit matches the collective model after rescaling") {
  ModelSpec lr;
  lr.kind = ModelKind::LongRangeIsing;
  lr.sites = 4;
  lr.alpha = 0.0;
  AnnealingProblem p_lr = make_model(lr);
  ModelSpec cs;
  cs.kind = ModelKind::CollectiveSpin;
  cs.sites = 4;
  AnnealingProblem p_cs = make_model(cs);

  // -sum_{i<j} Z_i Z_j = -2 Sz^2 + N/2 on the symmetric sector, so the
  // collective eigenvalues -m^2/sqrt(6) map to -2 m^2 + 2 at N=4.
  Eigen::SelfAdjointEigenSolver<MatrixXc> es_lr(p_lr.h0.entries());
  Eigen::SelfAdjointEigenSolver<MatrixXc> es_cs(p_cs.h0.entries());
  const double scale = 2.0 * std::sqrt(6.0);
  for (Eigen::Index i = 0; i < es_cs.eigenvalues().size(); ++i) {
    const double mapped = scale * es_cs.eigenvalues()(i) + 2.0;
    CHECK((es_lr.eigenvalues().array() - mapped).abs().minCoeff() < 1e-10);
  }
}

TEST_CASE("model initial and target states are normalized ground states") {
  for (int n : {2, 4, 6}) {
    AnnealingProblem p = make_model(short_range(n));
    CHECK(p.initial.norm() == doctest::Approx(1.0));
    CHECK(p.target.norm() == doctest::Approx(1.0));
    const auto [e1, gs1] = ground_state(p.h1);
    CHECK(std::abs(fidelity(p.initial, gs1) - 1.0) < 1e-10);
    CHECK(e1 == doctest::Approx(-n));
  }
}
