#include "cdpath/floquet.hpp"

#include <cmath>
#include <numbers>

#include "cdpath/models.hpp"

namespace cdpath {

namespace {

// Free algebra on two letters truncated at word length 3: 15 basis words,
// index = offset(len) + bits with the leftmost letter as the high bit.
constexpr int kWords = 15;
constexpr int kOffset[4] = {0, 1, 3, 7};

struct TruncatedAlgebra {
  std::array<Complex, kWords> c{};

  static TruncatedAlgebra one() {
    TruncatedAlgebra a;
    a.c[0] = 1.0;
    return a;
  }
};

int word_index(int len, int bits) { return kOffset[len] + bits; }

TruncatedAlgebra multiply(const TruncatedAlgebra& a, const TruncatedAlgebra& b) {
  TruncatedAlgebra out;
  for (int la = 0; la <= 3; ++la)
    for (int ba = 0; ba < (1 << la); ++ba) {
      const Complex ca = a.c[word_index(la, ba)];
      if (ca == Complex(0.0, 0.0)) continue;
      for (int lb = 0; lb + la <= 3; ++lb)
        for (int bb = 0; bb < (1 << lb); ++bb) {
          const Complex cb = b.c[word_index(lb, bb)];
          if (cb == Complex(0.0, 0.0)) continue;
          out.c[word_index(la + lb, (ba << lb) | bb)] += ca * cb;
        }
    }
  return out;
}

// exp(-i eps G) for a single letter G, truncated at degree 3.
TruncatedAlgebra pulse_exponential(double eps, int letter) {
  TruncatedAlgebra e = TruncatedAlgebra::one();
  const Complex x(0.0, -eps);
  e.c[word_index(1, letter)] = x;
  e.c[word_index(2, letter * 3)] = 0.5 * x * x;  // bits: 00 or 11
  e.c[word_index(3, letter * 7)] = x * x * x / 6.0;
  return e;
}

double spectral_norm(const MatrixXc& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(m, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)),
                  std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
}

}  // namespace

MagnusCoefficients magnus_coefficients(const std::array<double, 6>& eps) {
  TruncatedAlgebra u = TruncatedAlgebra::one();
  for (int i = 0; i < 6; ++i)
    u = multiply(pulse_exponential(eps[i], i % 2), u);  // pulse 1 first

  // log(1 + X) = X - X^2/2 + X^3/3 in the truncated algebra.
  TruncatedAlgebra x = u;
  x.c[0] -= 1.0;
  const TruncatedAlgebra x2 = multiply(x, x);
  const TruncatedAlgebra x3 = multiply(x2, x);
  TruncatedAlgebra omega;
  for (int i = 0; i < kWords; ++i)
    omega.c[i] = x.c[i] - 0.5 * x2.c[i] + x3.c[i] / 3.0;

  // H_F T = i Omega = f0 H0 + f1 H1 - i f01 [H1,H0]
  //         + f010 [H0,[H1,H0]] + f110 [H1,[H1,H0]].
  const Complex img(0.0, 1.0);
  MagnusCoefficients f;
  f.f0 = (img * omega.c[word_index(1, 0)]).real();
  f.f1 = (img * omega.c[word_index(1, 1)]).real();
  // word "10" carries -i f01
  f.f01 = (img * (img * omega.c[word_index(2, 0b10)])).real();
  // word "010" carries 2 f010, word "110" carries f110
  f.f010 = 0.5 * (img * omega.c[word_index(3, 0b010)]).real();
  f.f110 = (img * omega.c[word_index(3, 0b110)]).real();
  return f;
}

PulseSequence pulse_strengths(double lambda, double lambda_dot, double alpha1,
                              double beta1, double beta2, double period) {
  if (beta1 <= 0.0 || beta2 <= 0.0)
    throw FloquetError("pulse synthesis needs beta1, beta2 > 0");
  if (lambda_dot < 0.0)
    throw FloquetError("pulse synthesis needs lambda_dot >= 0");
  if (period <= 0.0) throw FloquetError("pulse synthesis needs T > 0");

  PulseSequence seq;
  seq.period = period;
  // The matched first-order coefficient is alpha = -alpha1 (positive for the
  // generic annealing AGP). A negative value cannot be synthesized with real
  // pulse strengths; fall back to |alpha| and flag.
  double alpha = -alpha1;
  if (alpha < 0.0 && lambda_dot > 0.0) {
    seq.sign_flagged = true;
    alpha = -alpha;
  }
  const double u = std::pow(beta1, 2.0 / 3.0) / std::cbrt(beta2);
  const double v = std::pow(beta2, 2.0 / 3.0) / std::cbrt(beta1);
  const double s = std::sqrt(alpha * beta1 / (3.0 * beta2));
  const double t = std::sqrt(3.0 * alpha * beta2 / beta1);
  const double sq = std::sqrt(lambda_dot) * std::pow(period, 1.0 / 6.0);
  const double t23 = std::pow(period, 2.0 / 3.0);
  const double c0 = lambda / 3.0 * t23;
  const double c1 = (1.0 - lambda) / 3.0 * t23;

  const std::array<double, 6> eta = {
      -u + s * sq + c0,       v + t * sq + c1, 2.0 * u + s * sq + c0,
      v + c1,                 -u - 2.0 * s * sq + c0,
      -2.0 * v - t * sq + c1};
  const double scale = std::cbrt(period);
  for (int i = 0; i < 6; ++i) seq.strengths[i] = scale * eta[i];
  return seq;
}

OperatorMatrix floquet_period_propagator(const PulseSequence& seq,
                                         const OperatorMatrix& h0,
                                         const OperatorMatrix& h1) {
  if (h0.basis() != h1.basis())
    throw FloquetError("pulse generators live in different bases");
  Eigen::SelfAdjointEigenSolver<MatrixXc> es0(h0.entries());
  Eigen::SelfAdjointEigenSolver<MatrixXc> es1(h1.entries());
  auto pulse = [&](double eps, const Eigen::SelfAdjointEigenSolver<MatrixXc>& es) {
    const VectorXc phases =
        (Complex(0.0, -eps) * es.eigenvalues().cast<Complex>()).array().exp();
    return MatrixXc(es.eigenvectors() * phases.asDiagonal() *
                    es.eigenvectors().adjoint());
  };
  MatrixXc u = MatrixXc::Identity(h0.dimension(), h0.dimension());
  for (int i = 0; i < 6; ++i) {
    const auto& es = (i % 2 == 0) ? es0 : es1;
    u = pulse(seq.strengths[i], es) * u;  // pulse 1 applied first
  }
  return OperatorMatrix::non_hermitian(h0.basis(), std::move(u));
}

OperatorMatrix floquet_hamiltonian(const OperatorMatrix& u, double period) {
  if (period <= 0.0) throw FloquetError("floquet_hamiltonian needs T > 0");
  const Eigen::ComplexSchur<MatrixXc> schur(u.entries());
  const Eigen::Index dim = u.dimension();
  VectorXc diag(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex z = schur.matrixT()(i, i);
    diag(i) = -std::arg(z) / period;
  }
  MatrixXc h = schur.matrixU() * diag.asDiagonal() * schur.matrixU().adjoint();
  return OperatorMatrix::hermitian(u.basis(), 0.5 * (h + h.adjoint().eval()));
}

std::vector<FloquetMatchPoint> verify_floquet_match(
    double lambda, double lambda_dot, double alpha1, double beta1, double beta2,
    const OperatorMatrix& h0, const OperatorMatrix& h1,
    const std::vector<double>& periods) {
  if (h0.basis() != h1.basis())
    throw FloquetError("verify_floquet_match: basis mismatch");
  const auto [hc1, hc2] = commutator_controls(h0, h1);
  const OperatorMatrix cd1 = first_commutator(h0, h1);  // i[H1,H0]
  const MatrixXc target = lambda * h0.entries() + (1.0 - lambda) * h1.entries() +
                          alpha1 * lambda_dot * cd1.entries() +
                          beta1 * hc1.entries() + beta2 * hc2.entries();
  const double target_norm = spectral_norm(target);

  std::vector<FloquetMatchPoint> out;
  out.reserve(periods.size());
  for (const double period : periods) {
    if (target_norm * period >= std::numbers::pi)
      throw FloquetError(
          "||H_CD|| T >= pi: matrix-log branch is ambiguous, use a smaller T");
    const PulseSequence seq =
        pulse_strengths(lambda, lambda_dot, alpha1, beta1, beta2, period);
    const OperatorMatrix u = floquet_period_propagator(seq, h0, h1);
    const OperatorMatrix hf = floquet_hamiltonian(u, period);
    FloquetMatchPoint pt;
    pt.period = period;
    pt.error = spectral_norm(hf.entries() - target);
    MagnusCoefficients mc = magnus_coefficients(seq.strengths);
    mc.f0 /= period;
    mc.f1 /= period;
    mc.f01 /= period;
    mc.f010 /= period;
    mc.f110 /= period;
    pt.targets = mc;
    out.push_back(pt);
  }
  return out;
}

std::array<double, 5> extract_generator_components(const OperatorMatrix& m,
                                                   const OperatorMatrix& h0,
                                                   const OperatorMatrix& h1) {
  const auto [hc1, hc2] = commutator_controls(h0, h1);
  const OperatorMatrix cd1 = first_commutator(h0, h1);
  const std::array<const OperatorMatrix*, 5> basis = {&h0, &h1, &cd1, &hc1, &hc2};
  const InnerProductWeight tr = InnerProductWeight::trace();
  Eigen::MatrixXd gram(5, 5);
  Eigen::VectorXd rhs(5);
  for (int i = 0; i < 5; ++i) {
    rhs(i) = op_inner(*basis[i], m, tr);
    for (int j = i; j < 5; ++j) {
      gram(i, j) = op_inner(*basis[i], *basis[j], tr);
      gram(j, i) = gram(i, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(5);
  for (int i = 0; i < 5; ++i)
    if (es.eigenvalues()(i) > 1e-12 * emax) inv(i) = 1.0 / es.eigenvalues()(i);
  const Eigen::VectorXd sol =
      es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose() * rhs;
  return {sol(0), sol(1), sol(2), sol(3), sol(4)};
}

}  // namespace cdpath
