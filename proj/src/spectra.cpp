#include "cdpath/spectra.hpp"

#include <cmath>

namespace cdpath {

namespace {
constexpr double kWeightFloor = 1e-12;

void check_ground_state(const Eigen::VectorXd& e) {
  const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
  if (e.size() > 1 && e(1) - e(0) < 1e-8 * scale)
    throw KrylovError("degenerate ground state in sector");
}
}  // namespace

std::vector<ExcitationDatum> gs_excitation_data(const OperatorMatrix& h,
                                                const OperatorMatrix& dh) {
  if (h.basis() != dh.basis())
    throw KrylovError("gs_excitation_data: basis mismatch");
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h.entries());
  const Eigen::VectorXd& e = es.eigenvalues();
  check_ground_state(e);

  const VectorXc coupling =
      es.eigenvectors().adjoint() * (dh.entries() * es.eigenvectors().col(0));
  std::vector<ExcitationDatum> data;
  for (Eigen::Index m = 1; m < e.size(); ++m) {
    const double w = std::norm(coupling(m));
    if (w < kWeightFloor) continue;
    ExcitationDatum d;
    d.omega = e(m) - e(0);
    d.weight = w;
    data.push_back(d);
  }
  return data;
}

FitCurveResult fit_curve(const AGPSolution& approx, const OperatorMatrix& exact,
                         const OperatorMatrix& h, const OperatorMatrix& dh) {
  if (exact.basis() != h.basis() || approx.matrix.basis() != h.basis() ||
      dh.basis() != h.basis())
    throw KrylovError("fit_curve: basis mismatch");

  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h.entries());
  const Eigen::VectorXd& e = es.eigenvalues();
  check_ground_state(e);
  const VectorXc v0 = es.eigenvectors().col(0);
  const VectorXc coupling = es.eigenvectors().adjoint() * (dh.entries() * v0);
  const VectorXc a_col = es.eigenvectors().adjoint() * (approx.matrix.entries() * v0);
  const VectorXc x_col = es.eigenvectors().adjoint() * (exact.entries() * v0);
  const double a_scale = std::max(1e-300, approx.matrix.entries().norm());

  FitCurveResult result;
  for (Eigen::Index m = 1; m < e.size(); ++m) {
    const double w = std::norm(coupling(m));
    if (w < kWeightFloor) continue;
    ExcitationDatum d;
    d.omega = e(m) - e(0);
    d.weight = w;
    if (std::abs(x_col(m)) < 1e-12 * a_scale) {
      // Exact element vanishes: the ratio is defined only if the approximate
      // element vanishes too (then it carries no information and is skipped).
      d.ratio = std::numeric_limits<double>::quiet_NaN();
      d.ratio_defined = false;
      (void)a_col;
    } else {
      d.ratio = (a_col(m) / x_col(m)).real();
      d.ratio_defined = true;
    }
    result.data.push_back(d);
  }

  result.alphas =
      agp_monomial_coefficients(h, dh, approx.matrix, std::max(1, approx.order));

  if (!result.data.empty()) {
    const double wmin = result.data.front().omega;
    const double wmax = result.data.back().omega;
    const double lo = std::log(0.5 * wmin);
    const double hi = std::log(2.0 * wmax);
    const int points = 200;
    result.curve.reserve(points);
    for (int i = 0; i < points; ++i) {
      const double w = std::exp(lo + (hi - lo) * i / (points - 1));
      double f = 0.0, wp = w;
      for (std::size_t k = 0; k < result.alphas.size(); ++k) {
        f -= result.alphas[k] * wp;
        wp *= w * w;
      }
      result.curve.push_back({w, f, w * f});
    }
  }
  return result;
}

}  // namespace cdpath
