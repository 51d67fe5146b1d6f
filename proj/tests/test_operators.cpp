#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cdpath/operators.hpp"

using namespace cdpath;

namespace {

OperatorMatrix random_hermitian(const SpinBasis& basis, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  MatrixXc m(basis.dimension(), basis.dimension());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = Complex(dist(rng), dist(rng));
  return OperatorMatrix::hermitian(basis, 0.5 * (m + m.adjoint().eval()));
}

std::vector<PauliStringTerm> axis_sum(int n, PauliAxis axis, double coeff) {
  std::vector<PauliStringTerm> terms;
  for (int i = 0; i < n; ++i) terms.push_back({{{i, axis}}, coeff});
  return terms;
}

std::vector<PauliStringTerm> ring_zz(int n, double coeff) {
  std::vector<PauliStringTerm> terms;
  for (int i = 0; i < n; ++i)
    terms.push_back({{{i, PauliAxis::Z}, {(i + 1) % n, PauliAxis::Z}}, coeff});
  return terms;
}

}  // namespace

TEST_CASE("single pauli z matrix") {
  const SpinBasis basis = SpinBasis::full_chain(1, false);
  const OperatorMatrix op = build_operator({{{{0, PauliAxis::Z}}, 1.0}}, basis);
  CHECK(op.entries()(0, 0) == Complex(1.0, 0.0));
  CHECK(op.entries()(1, 1) == Complex(-1.0, 0.0));
  CHECK(op.entries()(0, 1) == Complex(0.0, 0.0));
}

TEST_CASE("two-site zz eigenvalues on open chain") {
  const SpinBasis basis = SpinBasis::full_chain(2, false);
  const OperatorMatrix op = build_operator(
      {{{{0, PauliAxis::Z}, {1, PauliAxis::Z}}, -1.0}}, basis);
  const Eigen::Vector4d expected(-1.0, 1.0, 1.0, -1.0);
  CHECK((op.entries().diagonal().real() - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(op.entries().cwiseAbs().sum() == doctest::Approx(4.0));
}

TEST_CASE("transverse field ground state is the uniform superposition") {
  const SpinBasis basis = SpinBasis::full_chain(3, true);
  const OperatorMatrix op = build_operator(axis_sum(3, PauliAxis::X, -1.0), basis);
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(op.entries());
  CHECK(es.eigenvalues()(0) == doctest::Approx(-3.0).epsilon(1e-12));
  const VectorXc gs = es.eigenvectors().col(0);
  for (Eigen::Index i = 0; i < gs.size(); ++i)
    CHECK(std::abs(gs(i)) == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-10));
}

TEST_CASE("collective spin operators") {
  SUBCASE("N=1 reduces to the pauli matrices over two") {
    const auto ops = build_collective_ops(1);
    CHECK(std::abs(ops.sx.entries()(0, 1) - Complex(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(ops.sy.entries()(0, 1) - Complex(0.0, -0.5)) < 1e-14);
    CHECK(std::abs(ops.sz.entries()(0, 0) - Complex(0.5, 0.0)) < 1e-14);
  }
  SUBCASE("N=2 triplet z projection") {
    const auto ops = build_collective_ops(2);
    const Eigen::Vector3d expected(1.0, 0.0, -1.0);
    CHECK((ops.sz.entries().diagonal().real() - expected).cwiseAbs().maxCoeff() <
          1e-14);
  }
  SUBCASE("commutator algebra and casimir") {
    for (int n : {1, 2, 5, 20}) {
      const auto ops = build_collective_ops(n);
      const MatrixXc comm = ops.sx.entries() * ops.sy.entries() -
                            ops.sy.entries() * ops.sx.entries();
      CHECK((comm - Complex(0.0, 1.0) * ops.sz.entries()).cwiseAbs().maxCoeff() <
            1e-12);
      const double s = n / 2.0;
      const MatrixXc casimir = ops.sx.entries() * ops.sx.entries() +
                               ops.sy.entries() * ops.sy.entries() +
                               ops.sz.entries() * ops.sz.entries();
      CHECK((casimir - s * (s + 1.0) * MatrixXc::Identity(n + 1, n + 1))
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("sector projection") {
  const SpinBasis full = SpinBasis::full_chain(2, true);
  const SpinBasis sector = SpinBasis::symmetric_sector(2, true, 1, 0);

  SUBCASE("identity restricts to the sector identity") {
    const OperatorMatrix id = OperatorMatrix::identity(full);
    const OperatorMatrix proj = project_to_sector(id, sector);
    CHECK(proj.dimension() == sector.dimension());
    CHECK((proj.entries() - MatrixXc::Identity(proj.dimension(), proj.dimension()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
  SUBCASE("literal periodic zz sum at N=2 has eigenvalues -2 and 2") {
    const OperatorMatrix zz = build_operator(ring_zz(2, -1.0), full);
    const OperatorMatrix proj = project_to_sector(zz, sector);
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(proj.entries());
    CHECK(es.eigenvalues()(0) == doctest::Approx(-2.0));
    CHECK(es.eigenvalues()(es.eigenvalues().size() - 1) == doctest::Approx(2.0));
  }
  SUBCASE("longitudinal field breaks spin-flip parity") {
    const OperatorMatrix z = build_operator(axis_sum(2, PauliAxis::Z, 1.0), full);
    CHECK_THROWS_AS(project_to_sector(z, sector), SymmetryError);
    CHECK_THROWS_AS(build_operator(axis_sum(2, PauliAxis::Z, 1.0), sector),
                    SymmetryError);
  }
  SUBCASE("direct sector build matches projection") {
    for (int n : {3, 4, 5}) {
      const SpinBasis f = SpinBasis::full_chain(n, true);
      const SpinBasis s = SpinBasis::symmetric_sector(n, true, 1, 0);
      const OperatorMatrix direct = build_operator(ring_zz(n, -1.0), s);
      const OperatorMatrix projected =
          project_to_sector(build_operator(ring_zz(n, -1.0), f), s);
      CHECK((direct.entries() - projected.entries()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("sector spectra are subsets of the full spectra") {
    for (int n : {3, 4}) {
      const SpinBasis f = SpinBasis::full_chain(n, true);
      const SpinBasis s = SpinBasis::symmetric_sector(n, true, 1, 0);
      std::vector<PauliStringTerm> terms = ring_zz(n, -1.0);
      for (auto& t : axis_sum(n, PauliAxis::X, -0.7)) terms.push_back(t);
      const OperatorMatrix m_full = build_operator(terms, f);
      const OperatorMatrix m_sec = build_operator(terms, s);
      Eigen::SelfAdjointEigenSolver<MatrixXc> ef(m_full.entries());
      Eigen::SelfAdjointEigenSolver<MatrixXc> esec(m_sec.entries());
      for (Eigen::Index i = 0; i < esec.eigenvalues().size(); ++i) {
        const double v = esec.eigenvalues()(i);
        CHECK((ef.eigenvalues().array() - v).abs().minCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("model operators commute with spin flip parity") {
  const int n = 4;
  const SpinBasis full = SpinBasis::full_chain(n, true);
  const MatrixXc parity = parity_matrix(n);
  std::vector<std::vector<PauliStringTerm>> model_ops;
  model_ops.push_back(ring_zz(n, -1.0));
  model_ops.push_back(axis_sum(n, PauliAxis::X, -1.0));
  {
    std::vector<PauliStringTerm> yy;
    for (int i = 0; i < n; ++i)
      yy.push_back({{{i, PauliAxis::Y}, {(i + 1) % n, PauliAxis::Y}}, 1.0});
    model_ops.push_back(yy);
  }
  {
    std::vector<PauliStringTerm> zxz;
    for (int i = 0; i < n; ++i)
      zxz.push_back({{{i, PauliAxis::Z},
                      {(i + 1) % n, PauliAxis::X},
                      {(i + 2) % n, PauliAxis::Z}},
                     1.0});
    model_ops.push_back(zxz);
  }
  for (const auto& terms : model_ops) {
    const OperatorMatrix m = build_operator(terms, full);
    CHECK((m.entries() * parity - parity * m.entries()).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("operator inner product") {
  SUBCASE("pauli normalization and orthogonality") {
    const SpinBasis basis = SpinBasis::full_chain(1, false);
    const OperatorMatrix z = build_operator({{{{0, PauliAxis::Z}}, 1.0}}, basis);
    const OperatorMatrix x = build_operator({{{{0, PauliAxis::X}}, 1.0}}, basis);
    const auto tr = InnerProductWeight::trace();
    CHECK(op_inner(z, z, tr) == doctest::Approx(1.0));
    CHECK(op_inner(z, x, tr) == doctest::Approx(0.0));
    StateVector psi{basis, VectorXc::Zero(2)};
    psi.amplitudes << Complex(0.6, 0.0), Complex(0.0, 0.8);
    const auto gs = InnerProductWeight::ground_state(psi);
    CHECK(op_inner(z, x, gs) == doctest::Approx(0.0));
  }
  SUBCASE("transverse field sum norm at N=8") {
    const SpinBasis basis = SpinBasis::full_chain(8, true);
    const OperatorMatrix sx = build_operator(axis_sum(8, PauliAxis::X, 1.0), basis);
    // trace oracle over the full 2^8 basis
    const double oracle =
        (sx.entries() * sx.entries()).trace().real() / basis.dimension();
    CHECK(oracle == doctest::Approx(8.0));
    CHECK(op_inner(sx, sx, InnerProductWeight::trace()) == doctest::Approx(8.0));
  }
  SUBCASE("symmetric bilinear positive semidefinite on random pairs") {
    std::mt19937 rng(7);
    for (int n : {2, 3, 4}) {
      const SpinBasis basis = SpinBasis::full_chain(n, true);
      const OperatorMatrix a = random_hermitian(basis, rng);
      const OperatorMatrix b = random_hermitian(basis, rng);
      const OperatorMatrix c = random_hermitian(basis, rng);
      std::normal_distribution<double> dist(0.0, 1.0);
      VectorXc amp(basis.dimension());
      for (Eigen::Index i = 0; i < amp.size(); ++i)
        amp(i) = Complex(dist(rng), dist(rng));
      amp.normalize();
      const std::vector<InnerProductWeight> weights = {
          InnerProductWeight::trace(),
          InnerProductWeight::ground_state(StateVector{basis, amp})};
      for (const auto& w : weights) {
        CHECK(op_inner(a, b, w) == doctest::Approx(op_inner(b, a, w)));
        const OperatorMatrix bc = OperatorMatrix::hermitian(
            basis, 2.0 * b.entries() - 0.5 * c.entries());
        CHECK(op_inner(a, bc, w) ==
              doctest::Approx(2.0 * op_inner(a, b, w) - 0.5 * op_inner(a, c, w))
                  .epsilon(1e-10));
        CHECK(op_inner(a, a, w) >= -1e-12);
      }
    }
  }
  SUBCASE("basis mismatch and unnormalized weight are rejected") {
    const SpinBasis b1 = SpinBasis::full_chain(2, true);
    const SpinBasis b2 = SpinBasis::full_chain(3, true);
    const OperatorMatrix a = build_operator(axis_sum(2, PauliAxis::X, 1.0), b1);
    const OperatorMatrix b = build_operator(axis_sum(3, PauliAxis::X, 1.0), b2);
    CHECK_THROWS_AS(op_inner(a, b, InnerProductWeight::trace()), BasisError);
    StateVector bad{b1, VectorXc::Constant(4, Complex(1.0, 0.0))};
    CHECK_THROWS_AS(op_inner(a, a, InnerProductWeight::ground_state(bad)),
                    BasisError);
  }
}

TEST_CASE("pauli term validation") {
  const SpinBasis basis = SpinBasis::full_chain(2, true);
  CHECK_THROWS_AS(build_operator({{{{5, PauliAxis::Z}}, 1.0}}, basis), BasisError);
  CHECK_THROWS_AS(build_operator({{{{0, PauliAxis::Z}}, 1.0}}, SpinBasis::dicke(3)),
                  BasisError);
  CHECK_THROWS_AS(
      build_operator({{{{0, PauliAxis::Z}, {0, PauliAxis::X}}, 1.0}}, basis),
      BasisError);
}

TEST_CASE("hermitian constructor rejects non-hermitian entries") {
  const SpinBasis basis = SpinBasis::full_chain(1, false);
  MatrixXc bad(2, 2);
  bad << Complex(0, 0), Complex(1, 0), Complex(0.5, 0), Complex(0, 0);
  CHECK_THROWS_AS(OperatorMatrix::hermitian(basis, bad), BasisError);
  CHECK_NOTHROW(OperatorMatrix::non_hermitian(basis, bad));
}
