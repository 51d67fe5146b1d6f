#include "cdpath/agp.hpp"

#include <cmath>

namespace cdpath {

namespace {

MatrixXc commutator_i(const MatrixXc& h, const MatrixXc& x) {
  // i[H, X]; Hermitian when H and X are.
  MatrixXc c = Complex(0.0, 1.0) * (h * x - x * h);
  return 0.5 * (c + c.adjoint().eval());
}

OperatorMatrix wrap_hermitian(const SpinBasis& basis, MatrixXc m) {
  return OperatorMatrix::hermitian(basis, 0.5 * (m + m.adjoint().eval()));
}

// Nested-commutator chain E_j = ad_H^j(dH) in Hermitian representation:
// F_j = i^j E_j, so F_j = i[H, F_{j-1}].
std::vector<MatrixXc> hermitian_ad_chain(const MatrixXc& h, const MatrixXc& dh,
                                         int depth) {
  std::vector<MatrixXc> chain;
  chain.reserve(depth + 1);
  chain.push_back(dh);
  for (int j = 1; j <= depth; ++j) chain.push_back(commutator_i(h, chain.back()));
  return chain;
}

}  // namespace

KrylovData krylov_basis(const OperatorMatrix& h, const OperatorMatrix& dh,
                        int ell, const InnerProductWeight& w) {
  if (h.basis() != dh.basis())
    throw KrylovError("krylov_basis: H and dH in different bases");
  if (!h.is_hermitian() || !dh.is_hermitian())
    throw KrylovError("krylov_basis needs Hermitian inputs");
  if (ell < 1) throw KrylovError("krylov_basis needs ell >= 1");

  KrylovData data;
  data.requested_ell = ell;
  data.h = h;
  data.dh = dh;
  data.weight = w;

  const SpinBasis& basis = h.basis();
  auto weighted_inner = [&](const MatrixXc& a, const MatrixXc& b) {
    return op_inner(OperatorMatrix::hermitian(basis, a),
                    OperatorMatrix::hermitian(basis, b), w);
  };

  const double b0 = std::sqrt(std::max(0.0, weighted_inner(dh.entries(), dh.entries())));
  data.lanczos.push_back(b0);
  const double scale = dh.entries().norm();
  if (b0 <= 1e-14 * std::max(1.0, scale)) {
    data.closed = true;
    data.effective_ell = 0;
    return data;  // dH has vanishing weighted norm: empty basis
  }

  std::vector<MatrixXc> p;
  p.push_back(dh.entries() / b0);

  const double dim = static_cast<double>(basis.dimension());
  for (int k = 1; k <= 2 * ell; ++k) {
    MatrixXc cand = commutator_i(h.entries(), p[k - 1]);
    if (k >= 2) cand += data.lanczos[k - 1] * p[k - 2];
    // One round of full Gram-Schmidt against the existing chain.
    for (const auto& pj : p) cand -= weighted_inner(cand, pj) * pj;
    const double bk = std::sqrt(std::max(0.0, weighted_inner(cand, cand)));
    // Seminorm closure: a direction whose weighted norm is negligible
    // against its trace scale lives in the weight kernel and would be
    // amplified without bound by the normalization.
    const double trace_scale = cand.norm() / std::sqrt(dim);
    if (bk < kLanczosTol * b0 || bk < 1e-4 * trace_scale) {
      data.lanczos.push_back(0.0);
      data.closed = true;
      break;
    }
    data.lanczos.push_back(bk);
    p.push_back(cand / bk);
  }

  data.effective_ell = static_cast<int>(data.lanczos.size() - 1) / 2;
  data.operators.reserve(p.size());
  for (auto& m : p)
    data.operators.push_back(OperatorMatrix::hermitian(basis, std::move(m)));
  return data;
}

std::vector<double> agp_gammas(const std::vector<double>& b, int ell) {
  if (ell < 1) return {};
  if (b.size() < static_cast<std::size_t>(2 * ell + 1))
    throw KrylovError("agp_gammas: need 2*ell+1 Lanczos coefficients");

  std::vector<double> big_a(ell + 1, 0.0), big_b(ell + 1, 0.0);
  for (int k = 1; k <= ell; ++k)
    big_a[k] = b[2 * k - 1] * b[2 * k - 1] + b[2 * k] * b[2 * k];
  for (int k = 1; k < ell; ++k) big_b[k] = b[2 * k] * b[2 * k + 1];

  std::vector<double> r(ell, 0.0);  // r[k] for k = 1 .. ell-1
  if (ell >= 2) {
    r[ell - 1] = big_b[ell - 1] / big_a[ell];
    for (int k = ell - 1; k >= 2; --k) {
      const double denom = big_a[k] - r[k] * big_b[k];
      if (std::abs(denom) < 1e-12 * big_a[k])
        throw KrylovError("agp_gammas: degenerate recursion denominator");
      r[k - 1] = big_b[k - 1] / denom;
    }
  }

  std::vector<double> gamma(ell, 0.0);
  const double denom1 = (ell >= 2) ? big_a[1] - r[1] * big_b[1] : big_a[1];
  if (std::abs(denom1) < 1e-12 * std::max(big_a[1], b[0] * b[1]))
    throw KrylovError("agp_gammas: degenerate recursion denominator");
  gamma[0] = -b[0] * b[1] / denom1;
  for (int k = 1; k < ell; ++k) gamma[k] = -r[k] * gamma[k - 1];
  return gamma;
}

AGPSolution assemble_agp(const KrylovData& kry, const std::vector<double>& gammas) {
  const int ell = static_cast<int>(gammas.size());
  if (ell > kry.effective_ell)
    throw KrylovError("assemble_agp: order exceeds the effective Krylov depth");
  const SpinBasis& basis = kry.h.basis();
  MatrixXc a = MatrixXc::Zero(basis.dimension(), basis.dimension());
  // A = i sum gamma_k O_{2k-1}; with Hermitian representatives P_k = i^k O_k
  // this is sum (-1)^{k-1} gamma_k P_{2k-1}.
  double sign = 1.0;
  for (int k = 1; k <= ell; ++k) {
    a += sign * gammas[k - 1] * kry.operators[2 * k - 1].entries();
    sign = -sign;
  }
  AGPSolution sol;
  sol.gammas = gammas;
  sol.matrix = wrap_hermitian(basis, std::move(a));
  sol.order = ell;
  sol.action_value = action_value(kry.h, kry.dh, sol.matrix, kry.weight).value;
  return sol;
}

ActionReport action_value(const OperatorMatrix& h, const OperatorMatrix& dh,
                          const OperatorMatrix& a, const InnerProductWeight& w) {
  if (h.basis() != dh.basis() || h.basis() != a.basis())
    throw KrylovError("action_value: operators in different bases");
  const MatrixXc g =
      dh.entries() +
      Complex(0.0, 1.0) * (a.entries() * h.entries() - h.entries() * a.entries());
  const OperatorMatrix gop = wrap_hermitian(h.basis(), g);
  return ActionReport{op_inner(gop, gop, w), w.kind};
}

LsqAgpResult lsq_agp_oracle(const OperatorMatrix& h, const OperatorMatrix& dh,
                            int ell, const InnerProductWeight& w) {
  if (h.basis() != dh.basis())
    throw KrylovError("lsq_agp_oracle: H and dH in different bases");
  if (ell < 1) throw KrylovError("lsq_agp_oracle needs ell >= 1");
  const SpinBasis& basis = h.basis();
  const auto chain = hermitian_ad_chain(h.entries(), dh.entries(), 2 * ell);

  // G = dH + sum_k alpha_k ad_H^{2k}(dH); minimize (G|G) over alpha. The even
  // chain members are Hermitian as stored, the odd ones are i * ad^{2k-1}.
  std::vector<OperatorMatrix> even_ops;
  std::vector<double> scales;
  for (int k = 1; k <= ell; ++k) {
    // F_{2k} = i^{2k} ad^{2k}(dH) = (-1)^k ad^{2k}(dH)
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    MatrixXc d_k = sign * chain[2 * k];
    const double s = d_k.norm();
    scales.push_back(s > 0 ? s : 1.0);
    even_ops.push_back(wrap_hermitian(basis, d_k / scales.back()));
  }
  const OperatorMatrix dh_op = dh;
  Eigen::MatrixXd m(ell, ell);
  Eigen::VectorXd rhs(ell);
  for (int i = 0; i < ell; ++i) {
    rhs(i) = -op_inner(even_ops[i], dh_op, w);
    for (int j = i; j < ell; ++j) {
      m(i, j) = op_inner(even_ops[i], even_ops[j], w);
      m(j, i) = m(i, j);
    }
  }

  LsqAgpResult result;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd alpha_scaled;
  if (emax <= 0.0 || es.eigenvalues().minCoeff() < 1e-12 * emax) {
    // Linearly dependent commutators: pseudoinverse and flag.
    result.used_pseudoinverse = true;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(ell);
    for (int i = 0; i < ell; ++i)
      if (es.eigenvalues()(i) > 1e-12 * emax) inv(i) = 1.0 / es.eigenvalues()(i);
    alpha_scaled = es.eigenvectors() * inv.asDiagonal() *
                   es.eigenvectors().transpose() * rhs;
  } else {
    alpha_scaled = es.eigenvectors() *
                   es.eigenvalues().cwiseInverse().asDiagonal() *
                   es.eigenvectors().transpose() * rhs;
  }

  MatrixXc a = MatrixXc::Zero(basis.dimension(), basis.dimension());
  result.alphas.resize(ell);
  for (int k = 1; k <= ell; ++k) {
    const double alpha = alpha_scaled(k - 1) / scales[k - 1];
    result.alphas[k - 1] = alpha;
    // i * alpha_k ad^{2k-1}(dH) = alpha_k (-1)^{k-1} F_{2k-1}
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    a += alpha * sign * chain[2 * k - 1];
  }
  result.matrix = wrap_hermitian(basis, std::move(a));
  return result;
}

OperatorMatrix exact_agp(const OperatorMatrix& h, const OperatorMatrix& dh) {
  if (h.basis() != dh.basis())
    throw KrylovError("exact_agp: H and dH in different bases");
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h.entries());
  const Eigen::VectorXd& e = es.eigenvalues();
  const MatrixXc& v = es.eigenvectors();
  const MatrixXc dhe = v.adjoint() * dh.entries() * v;

  const Eigen::Index dim = e.size();
  const double escale = std::max(e.cwiseAbs().maxCoeff(), 1.0);
  const double cscale = std::max(dh.entries().norm(), 1.0);
  MatrixXc a = MatrixXc::Zero(dim, dim);
  for (Eigen::Index mrow = 0; mrow < dim; ++mrow) {
    for (Eigen::Index ncol = 0; ncol < dim; ++ncol) {
      if (mrow == ncol) continue;
      const double omega = e(mrow) - e(ncol);
      if (std::abs(omega) < 1e-10 * escale) {
        if (std::abs(dhe(mrow, ncol)) > 1e-10 * cscale)
          throw KrylovError(
              "exact_agp: degenerate level pair with nonzero coupling");
        continue;
      }
      a(mrow, ncol) = Complex(0.0, -1.0) * dhe(mrow, ncol) / omega;
    }
  }
  return wrap_hermitian(h.basis(), v * a * v.adjoint());
}

std::vector<double> agp_monomial_coefficients(const OperatorMatrix& h,
                                              const OperatorMatrix& dh,
                                              const OperatorMatrix& agp,
                                              int ell) {
  if (ell < 1) throw KrylovError("agp_monomial_coefficients needs ell >= 1");
  const SpinBasis& basis = h.basis();
  const auto chain = hermitian_ad_chain(h.entries(), dh.entries(), 2 * ell - 1);
  // Basis operators i * ad^{2k-1}(dH) = (-1)^{k-1} F_{2k-1}, Hermitian.
  std::vector<OperatorMatrix> odd_ops;
  std::vector<double> scales;
  for (int k = 1; k <= ell; ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    MatrixXc c_k = sign * chain[2 * k - 1];
    const double s = c_k.norm();
    scales.push_back(s > 0 ? s : 1.0);
    odd_ops.push_back(wrap_hermitian(basis, c_k / scales.back()));
  }
  const InnerProductWeight tr = InnerProductWeight::trace();
  Eigen::MatrixXd m(ell, ell);
  Eigen::VectorXd rhs(ell);
  for (int i = 0; i < ell; ++i) {
    rhs(i) = op_inner(odd_ops[i], agp, tr);
    for (int j = i; j < ell; ++j) {
      m(i, j) = op_inner(odd_ops[i], odd_ops[j], tr);
      m(j, i) = m(i, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ell);
  for (int i = 0; i < ell; ++i)
    if (es.eigenvalues()(i) > 1e-13 * emax) inv(i) = 1.0 / es.eigenvalues()(i);
  const Eigen::VectorXd sol =
      es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose() * rhs;
  std::vector<double> alphas(ell);
  for (int k = 0; k < ell; ++k) alphas[k] = sol(k) / scales[k];
  return alphas;
}

}  // namespace cdpath
