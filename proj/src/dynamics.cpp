#include "cdpath/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cdpath/agp.hpp"

namespace cdpath {

namespace {

constexpr double kNormDriftLimit = 1e-6;

// Steps needed to hold the RK4 norm drift of a unitary flow with spectral
// scale rho over duration T below ~2e-7 (drift per step ~ (rho h)^6 / 144).
int drift_limited_steps(double t_total, double rho) {
  const double x = t_total * rho;
  if (x <= 0.0) return 16;
  const double n_drift = 9.3 * std::pow(x, 1.2);
  const double n_stab = 3.0 * x;
  return static_cast<int>(std::ceil(std::max({n_drift, n_stab, 16.0})));
}

double spectral_norm(const MatrixXc& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(m, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)),
                  std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
}

MatrixXc assemble_hamiltonian(const AnnealingProblem& p, double lambda) {
  MatrixXc m = lambda * p.h0.entries() + (1.0 - lambda) * p.h1.entries();
  for (const auto& c : p.controls) m += c.profile(lambda) * c.op.entries();
  return m;
}

struct CachedPoint {
  double lambda = -1.0;
  MatrixXc h;        // augmented Hamiltonian (finite-time or GS weight)
  MatrixXc a;        // counterdiabatic generator
  double action = 0.0;
  bool has_h = false;
  bool has_a = false;
};

class Propagator {
 public:
  Propagator(const AnnealingProblem& p, const EvolutionOptions& opt, bool fast)
      : p_(p), opt_(opt), fast_(fast) {
    if (opt.ell < 0) throw EvolutionError("expansion order must be >= 0");
    need_agp_ = opt.include_agp && (opt.ell > 0 || opt.agp_override);
    if (need_agp_ && !opt.agp_override) {
      algebra_ = opt.algebra;
      if (!algebra_)
        algebra_ = std::make_shared<CommutatorAlgebra>(path_operators(p),
                                                       std::max(1, opt.ell));
      if (algebra_->max_ell() < opt.ell)
        throw EvolutionError("shared algebra too shallow for requested ell");
    }
    if (opt.weight == WeightPolicy::ProvidedTrajectory && !opt.trajectory)
      throw EvolutionError("ProvidedTrajectory weight without a trajectory");
  }

  const CachedPoint& at(double lambda) {
    for (const auto& e : cache_)
      if (e.lambda == lambda && e.has_a) return e;
    CachedPoint e;
    e.lambda = lambda;
    const bool need_h = !fast_ || opt_.weight == WeightPolicy::TrueGroundState ||
                        opt_.record_gs_overlap;
    if (need_h) {
      e.h = assemble_hamiltonian(p_, lambda);
      e.has_h = true;
    }
    if (need_agp_) {
      if (opt_.agp_override) {
        e.a = opt_.agp_override(lambda);
        e.action = -1.0;
      } else {
        EngineAgp sol;
        switch (opt_.weight) {
          case WeightPolicy::InfiniteT:
            sol = algebra_->agp(lambda, opt_.ell);
            break;
          case WeightPolicy::TrueGroundState: {
            Eigen::SelfAdjointEigenSolver<MatrixXc> es(e.h);
            sol = algebra_->agp(lambda, opt_.ell, es.eigenvectors().col(0));
            break;
          }
          case WeightPolicy::ProvidedTrajectory:
            sol = algebra_->agp(lambda, opt_.ell,
                                opt_.trajectory->nearest(lambda));
            break;
        }
        e.a = algebra_->materialize(sol.coords);
        e.action = sol.action;
      }
    }
    e.has_a = true;
    cache_[cursor_] = std::move(e);
    const CachedPoint& ref = cache_[cursor_];
    cursor_ = (cursor_ + 1) % cache_.size();
    return ref;
  }

  // d psi/dx = -i G psi, with x = t (finite time) or lambda (fast limit).
  void rhs(double x, const VectorXc& in, VectorXc& out) {
    if (fast_) {
      const CachedPoint& e = at(x);
      if (need_agp_)
        out.noalias() = Complex(0.0, -1.0) * (e.a * in);
      else
        out.setZero();
      return;
    }
    const auto sp = lambda_schedule(x, p_.schedule.tau);
    const CachedPoint& e = at(sp.lambda);
    out.noalias() = Complex(0.0, -1.0) * (e.h * in);
    if (need_agp_) out.noalias() += Complex(0.0, -sp.lambda_dot) * (e.a * in);
  }

  double action_at(double lambda) {
    if (!need_agp_ || opt_.agp_override) {
      // Bare path: the action of A = 0 is just the weighted norm of dH.
      const OperatorMatrix dh = augmented_hamiltonian_derivative(lambda, p_);
      const OperatorMatrix a =
          opt_.agp_override
              ? OperatorMatrix::hermitian(p_.basis(), opt_.agp_override(lambda))
              : OperatorMatrix::zero(p_.basis());
      const OperatorMatrix h = augmented_hamiltonian(lambda, p_);
      return action_value(h, dh, a, weight_for_action(lambda)).value;
    }
    return at(lambda).action;
  }

  double gs_overlap(double lambda, const VectorXc& psi) {
    const CachedPoint& e = at(lambda);
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(
        e.has_h ? e.h : assemble_hamiltonian(p_, lambda));
    return std::norm(es.eigenvectors().col(0).dot(psi));
  }

  double spectral_scale(double tau_or_one) {
    double rho_h = 0.0, rho_a = 0.0;
    for (int i = 0; i <= 16; ++i) {
      const double lambda = i / 16.0;
      if (!fast_) rho_h = std::max(rho_h, spectral_norm(assemble_hamiltonian(p_, lambda)));
      if (need_agp_) {
        const CachedPoint& e = at(lambda);
        rho_a = std::max(rho_a, spectral_norm(e.a));
      }
    }
    // Sampled maxima underestimate sharp features between grid points.
    const double margin = 1.3;
    if (fast_) return margin * rho_a;
    const double lambda_dot_max =
        std::numbers::pi * std::numbers::pi / (4.0 * tau_or_one);
    return margin * (rho_h + lambda_dot_max * rho_a);
  }

 private:
  InnerProductWeight weight_for_action(double lambda) {
    switch (opt_.weight) {
      case WeightPolicy::InfiniteT:
        return InnerProductWeight::trace();
      case WeightPolicy::TrueGroundState: {
        Eigen::SelfAdjointEigenSolver<MatrixXc> es(
            assemble_hamiltonian(p_, lambda));
        return InnerProductWeight::ground_state(
            StateVector{p_.basis(), es.eigenvectors().col(0)});
      }
      case WeightPolicy::ProvidedTrajectory:
        return InnerProductWeight::approximate_state(
            StateVector{p_.basis(), opt_.trajectory->nearest(lambda)});
    }
    return InnerProductWeight::trace();
  }

  const AnnealingProblem& p_;
  const EvolutionOptions& opt_;
  bool fast_;
  bool need_agp_ = false;
  std::shared_ptr<const CommutatorAlgebra> algebra_;
  std::array<CachedPoint, 4> cache_;
  std::size_t cursor_ = 0;
};

EvolutionResult integrate(const AnnealingProblem& p,
                          const EvolutionOptions& opt, bool fast) {
  if (!fast && p.schedule.mode != ScheduleMode::FiniteTime)
    throw EvolutionError("evolve_cd needs a FiniteTime schedule");
  if (fast && p.schedule.mode != ScheduleMode::FastLimit)
    throw EvolutionError("evolve_fast_limit needs a FastLimit schedule");
  if (!fast && p.schedule.tau <= 0.0)
    throw EvolutionError("finite-time evolution needs tau > 0");

  Propagator prop(p, opt, fast);
  const double x_end = fast ? 1.0 : p.schedule.tau;
  const int base = opt.steps > 0 ? opt.steps : (fast ? 1000 : 2000);
  int steps = opt.auto_steps
                  ? std::max(base, drift_limited_steps(x_end, prop.spectral_scale(x_end)))
                  : base;
  if (steps < 2) throw EvolutionError("step count too small");

  VectorXc psi(p.initial.amplitudes.size());
  VectorXc k1(psi.size()), k2(psi.size()), k3(psi.size()), k4(psi.size()),
      tmp(psi.size());

  EvolutionResult result;
  auto lambda_of = [&](double x) {
    return fast ? x : lambda_schedule(x, p.schedule.tau).lambda;
  };
  auto record = [&](double x, const VectorXc& state) {
    const double lambda = lambda_of(x);
    TrajectoryPoint pt;
    pt.x = x;
    if (opt.record_action) pt.action = prop.action_at(lambda);
    if (opt.record_gs_overlap) pt.gs_overlap = prop.gs_overlap(lambda, state);
    if (opt.record_action || opt.record_gs_overlap)
      result.trajectory.push_back(pt);
    if (opt.record_trajectory) {
      if (!result.states) result.states = std::make_shared<Trajectory>();
      result.states->lambdas.push_back(lambda);
      result.states->states.push_back(state.normalized());
    }
  };

  // The a-priori step estimate can miss narrow spectral spikes; retry with a
  // doubled count until the drift budget holds.
  double drift = 0.0;
  for (int attempt = 0;; ++attempt) {
    psi = p.initial.amplitudes;
    result.trajectory.clear();
    result.states.reset();
    drift = 0.0;
    const double h = x_end / steps;
    record(0.0, psi);
    for (int i = 0; i < steps; ++i) {
      const double x0 = i * h;
      const double xm = x0 + 0.5 * h;
      const double x1 = (i + 1 == steps) ? x_end : (i + 1) * h;
      prop.rhs(x0, psi, k1);
      tmp = psi + 0.5 * h * k1;
      prop.rhs(xm, tmp, k2);
      tmp = psi + 0.5 * h * k2;
      prop.rhs(xm, tmp, k3);
      tmp = psi + h * k3;
      prop.rhs(x1, tmp, k4);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      drift = std::max(drift, std::abs(psi.norm() - 1.0));
      if (drift > 10.0) break;  // diverging; no point finishing the sweep
      record(x1, psi);
    }
    if (drift <= kNormDriftLimit) break;
    if (!opt.auto_steps || attempt >= 4)
      throw EvolutionError("integrator norm drift " + std::to_string(drift) +
                           " exceeds 1e-6; increase the step count");
    steps *= 2;
  }

  result.steps_used = steps;
  result.norm_drift = drift;
  result.final_state = StateVector{p.basis(), psi};
  result.fidelity = fidelity(p.target, result.final_state);
  return result;
}

}  // namespace

const VectorXc& Trajectory::nearest(double lambda) const {
  if (lambdas.empty()) throw EvolutionError("empty trajectory");
  const auto it = std::lower_bound(lambdas.begin(), lambdas.end(), lambda);
  if (it == lambdas.begin()) return states.front();
  if (it == lambdas.end()) return states.back();
  const std::size_t hi = static_cast<std::size_t>(it - lambdas.begin());
  return (lambda - lambdas[hi - 1] <= lambdas[hi] - lambda) ? states[hi - 1]
                                                            : states[hi];
}

EvolutionResult evolve_cd(const AnnealingProblem& problem,
                          const EvolutionOptions& options) {
  return integrate(problem, options, false);
}

EvolutionResult evolve_fast_limit(const AnnealingProblem& problem,
                                  const EvolutionOptions& options) {
  return integrate(problem, options, true);
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.basis != b.basis) throw EvolutionError("fidelity: basis mismatch");
  if (std::abs(a.norm() - 1.0) > 1e-6 || std::abs(b.norm() - 1.0) > 1e-6)
    throw EvolutionError("fidelity: states are not normalized");
  return std::norm(a.amplitudes.dot(b.amplitudes));
}

double even_sector_weight(const StateVector& psi) {
  const SpinBasis& basis = psi.basis;
  if (basis.kind() == BasisKind::SymmetricSector) {
    if (basis.parity().has_value()) return *basis.parity() == 1 ? 1.0 : 0.0;
    const StateVector full = lift_from_sector(
        psi, SpinBasis::full_chain(basis.sites(), basis.periodic()));
    return even_sector_weight(full);
  }
  Complex overlap(0.0, 0.0);
  if (basis.kind() == BasisKind::FullChain) {
    const std::uint64_t mask = (1ull << basis.sites()) - 1;
    for (Eigen::Index s = 0; s < psi.amplitudes.size(); ++s)
      overlap += std::conj(psi.amplitudes(s)) *
                 psi.amplitudes(static_cast<Eigen::Index>(
                     (~static_cast<std::uint64_t>(s)) & mask));
  } else {  // Dicke: spin flip reverses the magnetization index
    const Eigen::Index dim = psi.amplitudes.size();
    for (Eigen::Index i = 0; i < dim; ++i)
      overlap += std::conj(psi.amplitudes(i)) * psi.amplitudes(dim - 1 - i);
  }
  return 0.5 * (psi.amplitudes.squaredNorm() + overlap.real());
}

}  // namespace cdpath
