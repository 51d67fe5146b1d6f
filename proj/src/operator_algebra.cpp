#include "cdpath/operator_algebra.hpp"

#include <cmath>

#include "cdpath/agp.hpp"

namespace cdpath {

namespace {

// R(i[K, X]) = [K, R(X)^T] for real-symmetric K.
Eigen::MatrixXd commutator_real(const Eigen::MatrixXd& k,
                                const Eigen::MatrixXd& r) {
  const Eigen::MatrixXd rt = r.transpose();
  return k * rt - rt * k;
}

}  // namespace

Eigen::MatrixXd CommutatorAlgebra::real_rep(const MatrixXc& m) const {
  return m.real() + m.imag();  // S + A for Hermitian S + iA
}

CommutatorAlgebra::CommutatorAlgebra(const PathOperators& path, int max_ell) {
  if (path.ops.empty()) throw KrylovError("empty generator set");
  if (max_ell < 1) throw KrylovError("max_ell must be >= 1");
  max_ell_ = max_ell;
  n_gen_ = path.ops.size();
  coeffs_ = path.coefficients;
  spin_basis_ = path.ops[0]->basis();
  dim_ = spin_basis_.dimension();

  gen_real_.reserve(n_gen_);
  for (const auto* op : path.ops) {
    if (op->basis() != spin_basis_)
      throw KrylovError("path generators live in different bases");
    const double scale = std::max(1.0, op->entries().norm());
    if (op->entries().imag().norm() > 1e-12 * scale)
      throw KrylovError(
          "commutator algebra needs real-symmetric generators (use a k = 0 "
          "sector or the full chain)");
    gen_real_.push_back(op->entries().real());
  }

  const double dinv = 1.0 / static_cast<double>(dim_);
  const Eigen::Index flat = dim_ * dim_;
  Eigen::Index capacity = 64;
  w_flat_.resize(flat, capacity);
  std::vector<int> level_of;
  Eigen::Index count = 0;

  auto add_candidate = [&](const Eigen::MatrixXd& cand, int level) {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(cand.data(), flat);
    const double orig = std::sqrt(v.squaredNorm() * dinv);
    if (orig <= 0.0) return;
    for (int pass = 0; pass < 2; ++pass) {
      if (count == 0) break;
      const auto basis = w_flat_.leftCols(count);
      v -= basis * (basis.transpose() * v) * dinv;
    }
    const double res = std::sqrt(v.squaredNorm() * dinv);
    if (res < 1e-9 * orig) return;
    if (count == capacity) {
      capacity *= 2;
      w_flat_.conservativeResize(Eigen::NoChange, capacity);
    }
    w_flat_.col(count++) = v / res;
    level_of.push_back(level);
  };

  for (const auto& g : gen_real_) add_candidate(g, 0);
  Eigen::Index frontier_begin = 0;
  for (int level = 1; level <= 2 * max_ell; ++level) {
    const Eigen::Index frontier_end = count;
    for (Eigen::Index j = frontier_begin; j < frontier_end; ++j) {
      if (level_of[static_cast<std::size_t>(j)] != level - 1) continue;
      const Eigen::MatrixXd wj =
          Eigen::Map<const Eigen::MatrixXd>(w_flat_.col(j).data(), dim_, dim_);
      for (std::size_t a = 0; a < n_gen_; ++a)
        add_candidate(commutator_real(gen_real_[a], wj), level);
    }
    frontier_begin = frontier_end;
  }

  basis_count_ = count;
  w_flat_.conservativeResize(Eigen::NoChange, basis_count_);

  gen_coords_.resize(n_gen_);
  for (std::size_t a = 0; a < n_gen_; ++a) {
    const auto v = Eigen::Map<const Eigen::VectorXd>(gen_real_[a].data(), flat);
    gen_coords_[a] = (w_flat_.transpose() * v) * dinv;
  }

  // ad_a columns: expansion of i[K_a, W_k]. Exact for k below the top nesting
  // level; top-level columns are projections and are never consumed by a
  // depth <= max_ell recursion.
  ad_.assign(n_gen_, Eigen::MatrixXd(basis_count_, basis_count_));
  for (std::size_t a = 0; a < n_gen_; ++a)
    for (Eigen::Index k = 0; k < basis_count_; ++k) {
      const Eigen::MatrixXd wk =
          Eigen::Map<const Eigen::MatrixXd>(w_flat_.col(k).data(), dim_, dim_);
      const Eigen::MatrixXd c = commutator_real(gen_real_[a], wk);
      const auto v = Eigen::Map<const Eigen::VectorXd>(c.data(), flat);
      ad_[a].col(k) = (w_flat_.transpose() * v) * dinv;
    }
}

MatrixXc CommutatorAlgebra::materialize(const Eigen::VectorXd& coords) const {
  const Eigen::VectorXd flat = w_flat_ * coords;
  const Eigen::MatrixXd r =
      Eigen::Map<const Eigen::MatrixXd>(flat.data(), dim_, dim_);
  const Eigen::MatrixXd sym = 0.5 * (r + r.transpose());
  const Eigen::MatrixXd anti = 0.5 * (r - r.transpose());
  return sym.cast<Complex>() + Complex(0.0, 1.0) * anti.cast<Complex>();
}

double CommutatorAlgebra::frobenius_norm(const Eigen::VectorXd& coords) const {
  return std::sqrt(static_cast<double>(dim_)) * coords.norm();
}

EngineAgp CommutatorAlgebra::agp(double lambda, int ell) const {
  return agp_impl(lambda, ell, nullptr);
}

EngineAgp CommutatorAlgebra::agp(double lambda, int ell, const VectorXc& psi) const {
  return agp_impl(lambda, ell, &psi);
}


EngineAgp CommutatorAlgebra::agp_impl(double lambda, int ell,
                                      const VectorXc* psi) const {
  if (ell > max_ell_)
    throw KrylovError("requested AGP order exceeds the precomputed depth");
  const int m = static_cast<int>(basis_count_);
  std::vector<double> c(n_gen_), cdot(n_gen_);
  coeffs_(lambda, c, cdot);

  Eigen::MatrixXd liouville = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t a = 0; a < n_gen_; ++a) liouville += c[a] * ad_[a];
  Eigen::VectorXd dh = Eigen::VectorXd::Zero(m);
  for (std::size_t a = 0; a < n_gen_; ++a) dh += cdot[a] * gen_coords_[a];

  // Metric of the weighted inner product in the W basis (identity for the
  // trace weight): G_jk = Re <psi|{W_j, W_k}/2|psi> = Re[(W_j psi)^dag W_k psi].
  Eigen::MatrixXd gram;
  if (psi) {
    const Eigen::VectorXd pr = psi->real();
    const Eigen::VectorXd pi = psi->imag();
    Eigen::MatrixXd yr(m, dim_), yi(m, dim_);  // rows: W_j psi split re/im
    for (int j = 0; j < m; ++j) {
      const Eigen::MatrixXd wj =
          Eigen::Map<const Eigen::MatrixXd>(w_flat_.col(j).data(), dim_, dim_);
      // W = S + iA with S = (R + R^T)/2, A = (R - R^T)/2
      const Eigen::VectorXd r_pr = wj * pr, rt_pr = wj.transpose() * pr;
      const Eigen::VectorXd r_pi = wj * pi, rt_pi = wj.transpose() * pi;
      yr.row(j) = (0.5 * (r_pr + rt_pr) - 0.5 * (r_pi - rt_pi)).transpose();
      yi.row(j) = (0.5 * (r_pi + rt_pi) + 0.5 * (r_pr - rt_pr)).transpose();
    }
    gram = yr * yr.transpose() + yi * yi.transpose();
    gram = 0.5 * (gram + gram.transpose().eval());
  }
  auto mdot = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
    return psi ? x.dot(gram * z) : x.dot(z);
  };

  EngineAgp out;
  const double b0 = std::sqrt(std::max(0.0, mdot(dh, dh)));
  out.lanczos.push_back(b0);
  if (b0 <= 1e-14 * std::max(1.0, dh.norm())) {
    out.closed = true;
    out.coords = Eigen::VectorXd::Zero(m);
    out.action = b0 * b0;
    return out;
  }

  std::vector<Eigen::VectorXd> p;
  p.push_back(dh / b0);
  for (int k = 1; k <= 2 * ell; ++k) {
    Eigen::VectorXd cand = liouville * p[k - 1];
    if (k >= 2) cand += out.lanczos[k - 1] * p[k - 2];
    for (const auto& pj : p) cand -= mdot(cand, pj) * pj;
    const double bk = std::sqrt(std::max(0.0, mdot(cand, cand)));
    // Seminorm closure: directions in the weight kernel terminate the chain
    // (their coordinate norm dwarfs the weighted norm, and normalizing them
    // would amplify kernel junk into the assembled operator).
    if (bk < kLanczosTol * b0 || bk < 1e-4 * cand.norm()) {
      out.lanczos.push_back(0.0);
      out.closed = true;
      break;
    }
    out.lanczos.push_back(bk);
    p.push_back(cand / bk);
  }

  out.effective_ell = static_cast<int>(out.lanczos.size() - 1) / 2;

  // Gamma coefficients at a given depth: the closed-form recursion, or the
  // pseudoinverse of the tridiagonal stationarity system when it is singular
  // (possible under seminorm weights; the action is bounded below, so the
  // system is consistent and the minimum-norm solution attains the minimum).
  auto gammas_at = [&](int depth) -> std::vector<double> {
    if (depth < 1) return {};
    try {
      return agp_gammas(out.lanczos, depth);
    } catch (const KrylovError&) {
      out.degenerate_recursion = true;
      const auto& b = out.lanczos;
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(depth, depth);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(depth);
      rhs(0) = -b[0] * b[1];
      for (int k = 1; k <= depth; ++k) {
        t(k - 1, k - 1) = b[2 * k - 1] * b[2 * k - 1] + b[2 * k] * b[2 * k];
        if (k < depth) {
          t(k - 1, k) = b[2 * k] * b[2 * k + 1];
          t(k, k - 1) = t(k - 1, k);
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
      Eigen::VectorXd inv = Eigen::VectorXd::Zero(depth);
      for (int i = 0; i < depth; ++i)
        if (es.eigenvalues()(i) > 1e-12 * emax)
          inv(i) = 1.0 / es.eigenvalues()(i);
      const Eigen::VectorXd sol = es.eigenvectors() * inv.asDiagonal() *
                                  es.eigenvectors().transpose() * rhs;
      return {sol.data(), sol.data() + depth};
    }
  };

  // A coefficient beyond any physical gauge-potential scale signals a chain
  // direction barely above the termination tolerance (an almost-closed
  // space); the action valley is flat there, so step down to the largest
  // depth with tame coefficients.
  constexpr double kGammaCap = 1e5;
  auto tame = [](const std::vector<double>& g) {
    for (double v : g)
      if (!(std::abs(v) <= kGammaCap)) return false;
    return true;
  };
  int use = std::min(ell, out.effective_ell);
  out.gammas = gammas_at(use);
  while (use > 0 && !tame(out.gammas)) {
    --use;
    out.depth_reduced = true;
    out.gammas = gammas_at(use);
  }

  out.coords = Eigen::VectorXd::Zero(m);
  double sign = 1.0;
  for (int k = 1; k <= use; ++k) {
    out.coords += sign * out.gammas[k - 1] * p[2 * k - 1];
    sign = -sign;
  }
  if (psi && use > 0) {
    // Kernel components of a seminorm-weighted solution carry no action but
    // can blow up the operator norm; keep the minimum-norm representative.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const double gmax = es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd filtered = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i)
      if (es.eigenvalues()(i) > 1e-12 * gmax)
        filtered += es.eigenvectors().col(i) *
                    es.eigenvectors().col(i).dot(out.coords);
    out.coords = filtered;
  }
  const Eigen::VectorXd g = dh - liouville * out.coords;
  out.action = std::max(0.0, mdot(g, g));
  return out;
}

}  // namespace cdpath
