#include "cdpath/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cdpath {

namespace {

constexpr double kGolden = 1.618033988749895;

double checked_eval(const std::function<double(const Eigen::VectorXd&)>& f,
                    const Eigen::VectorXd& x, int& evals) {
  const double v = f(x);
  ++evals;
  if (!std::isfinite(v))
    throw OptimizeError("objective returned a non-finite value");
  return v;
}

struct LineResult {
  double s = 0.0;
  double f = 0.0;
};

// Brent refinement of a bounded scalar minimum: interval [lo, hi] with an
// initial best point (u, fu) inside it.
template <typename Phi>
LineResult brent_refine(Phi&& phi, double lo, double hi, double u, double fu,
                        double xtol) {
  double v = u, fv = fu, w = u, fw = fu;
  double d_step = 0.0, e_step = 0.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double tol1 = xtol * 0.5 + 1e-12 * std::abs(u);
    if (std::abs(u - mid) <= 2.0 * tol1 - 0.5 * (hi - lo)) break;
    double trial;
    bool parabolic = false;
    if (std::abs(e_step) > tol1) {
      const double r = (u - w) * (fu - fv);
      double q = (u - v) * (fu - fw);
      double pnum = (u - v) * q - (u - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) pnum = -pnum;
      q = std::abs(q);
      if (std::abs(pnum) < std::abs(0.5 * q * e_step) && pnum > q * (lo - u) &&
          pnum < q * (hi - u)) {
        parabolic = true;
        e_step = d_step;
        d_step = pnum / q;
      }
    }
    if (!parabolic) {
      e_step = (u >= mid) ? lo - u : hi - u;
      d_step = 0.381966 * e_step;
    }
    trial = (std::abs(d_step) >= tol1) ? u + d_step
                                       : u + (d_step > 0 ? tol1 : -tol1);
    trial = std::clamp(trial, lo, hi);
    const double ft = phi(trial);
    if (ft <= fu) {
      if (trial >= u)
        lo = u;
      else
        hi = u;
      v = w;
      fv = fw;
      w = u;
      fw = fu;
      u = trial;
      fu = ft;
    } else {
      if (trial < u)
        lo = trial;
      else
        hi = trial;
      if (ft <= fw || w == u) {
        v = w;
        fv = fw;
        w = trial;
        fw = ft;
      } else if (ft <= fv || v == u || v == w) {
        v = trial;
        fv = ft;
      }
    }
  }
  return {u, fu};
}

// Minimum of f(x + s d) over the feasible segment of s. Brackets from s = 0,
// then refines with Brent. Returns the accepted step and value.

LineResult line_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x, double fx,
                         const Eigen::VectorXd& d, const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper, double xtol, double step0,
                         int& evals) {
  double s_lo = -std::numeric_limits<double>::infinity();
  double s_hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (std::abs(d(i)) < 1e-15) continue;
    const double to_upper = (upper(i) - x(i)) / d(i);
    const double to_lower = (lower(i) - x(i)) / d(i);
    s_hi = std::min(s_hi, std::max(to_upper, to_lower));
    s_lo = std::max(s_lo, std::min(to_upper, to_lower));
  }
  if (!(s_hi > s_lo + 1e-14)) return {0.0, fx};

  auto phi = [&](double s) {
    Eigen::VectorXd p = x + s * d;
    for (Eigen::Index i = 0; i < p.size(); ++i)
      p(i) = std::clamp(p(i), lower(i), upper(i));
    return checked_eval(f, p, evals);
  };

  // Pick the downhill side of 0, then expand the bracket by the golden ratio
  // until the function rises or a bound is reached.
  const double step = std::min(step0, 0.5 * (s_hi - s_lo));
  const double fwd = std::clamp(step, s_lo, s_hi);
  const double bwd = std::clamp(-step, s_lo, s_hi);
  const double f_fwd = (fwd != 0.0) ? phi(fwd) : fx;
  LineResult out{0.0, fx};
  double a = 0.0, b, fb;
  if (f_fwd < fx || bwd == 0.0) {
    b = fwd;
    fb = f_fwd;
  } else {
    const double f_bwd = phi(bwd);
    if (f_bwd >= fx) {
      // 0 sits below both neighbours
      out = brent_refine(phi, bwd, fwd, 0.0, fx, xtol);
      return out.f < fx ? out : LineResult{0.0, fx};
    }
    b = bwd;
    fb = f_bwd;
  }
  double c = std::clamp(b + kGolden * (b - a), s_lo, s_hi);
  double fc = (c == b) ? fb : phi(c);
  while (fc < fb && c != s_lo && c != s_hi) {
    a = b;
    b = c;
    fb = fc;
    c = std::clamp(b + kGolden * (b - a), s_lo, s_hi);
    if (c == b) break;
    fc = phi(c);
  }
  if (fc < fb) {  // minimum pushed against a bound
    b = c;
    fb = fc;
  }
  const double lo = std::min({a, b, c});
  const double hi = std::max({a, b, c});
  out = brent_refine(phi, lo, hi, b, fb, xtol);
  return out.f < fx ? out : LineResult{0.0, fx};
}

}  // namespace

PowellResult powell_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper,
                             const PowellOptions& options) {
  const Eigen::Index n = x0.size();
  if (n == 0) throw OptimizeError("powell_minimize: empty parameter vector");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(lower(i) < upper(i)))
      throw OptimizeError("powell_minimize: invalid bounds");

  PowellResult res;
  res.x = x0;
  for (Eigen::Index i = 0; i < n; ++i)
    res.x(i) = std::clamp(res.x(i), lower(i), upper(i));
  res.f = checked_eval(f, res.x, res.evaluations);

  Eigen::MatrixXd dirs = Eigen::MatrixXd::Identity(n, n);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    res.iterations = iter + 1;
    const double f_start = res.f;
    const Eigen::VectorXd x_start = res.x;
    double biggest_drop = 0.0;
    Eigen::Index ibig = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double f_before = res.f;
      const LineResult lr =
          line_minimize(f, res.x, res.f, dirs.col(i), lower, upper,
                        options.line_tol, options.initial_step, res.evaluations);
      if (lr.s != 0.0) {
        res.x += lr.s * dirs.col(i);
        for (Eigen::Index j = 0; j < n; ++j)
          res.x(j) = std::clamp(res.x(j), lower(j), upper(j));
        res.f = lr.f;
      }
      if (f_before - res.f > biggest_drop) {
        biggest_drop = f_before - res.f;
        ibig = i;
      }
    }
    if (f_start - res.f <= options.tol) break;
    if (n == 1) continue;

    // Direction replacement test (extrapolated point along the net move).
    Eigen::VectorXd x_e = 2.0 * res.x - x_start;
    for (Eigen::Index j = 0; j < n; ++j)
      x_e(j) = std::clamp(x_e(j), lower(j), upper(j));
    const double f_e = checked_eval(f, x_e, res.evaluations);
    if (f_e < f_start) {
      const double t = 2.0 * (f_start - 2.0 * res.f + f_e) *
                           std::pow(f_start - res.f - biggest_drop, 2) -
                       biggest_drop * std::pow(f_start - f_e, 2);
      if (t < 0.0) {
        Eigen::VectorXd d_new = res.x - x_start;
        const double norm = d_new.norm();
        if (norm > 1e-12) {
          d_new /= norm;
          const LineResult lr =
              line_minimize(f, res.x, res.f, d_new, lower, upper,
                            options.line_tol, options.initial_step,
                            res.evaluations);
          if (lr.s != 0.0) {
            res.x += lr.s * d_new;
            for (Eigen::Index j = 0; j < n; ++j)
              res.x(j) = std::clamp(res.x(j), lower(j), upper(j));
            res.f = lr.f;
          }
          dirs.col(ibig) = dirs.col(n - 1);
          dirs.col(n - 1) = d_new;
        }
      }
    }
  }
  return res;
}

namespace {

std::vector<Eigen::VectorXd> restart_seeds(int n_params, double bound,
                                           int restarts, unsigned seed) {
  std::vector<double> levels = {0.0, std::min(1.0, bound), -std::min(1.0, bound),
                                std::min(2.5, bound), -std::min(2.5, bound)};
  std::vector<Eigen::VectorXd> grid;
  std::vector<int> idx(n_params, 0);
  while (true) {
    Eigen::VectorXd v(n_params);
    for (int i = 0; i < n_params; ++i) v(i) = levels[idx[i]];
    grid.push_back(v);
    int pos = n_params - 1;
    while (pos >= 0 && ++idx[pos] == static_cast<int>(levels.size())) {
      idx[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  std::stable_sort(grid.begin(), grid.end(),
                   [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                     return a.cwiseAbs().sum() < b.cwiseAbs().sum();
                   });
  const int want = std::max(1, restarts);
  if (static_cast<int>(grid.size()) > want) grid.resize(want);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-bound, bound);
  while (static_cast<int>(grid.size()) < want) {
    Eigen::VectorXd v(n_params);
    for (int i = 0; i < n_params; ++i) v(i) = dist(rng);
    grid.push_back(v);
  }
  return grid;
}

}  // namespace

OptimizationResult optimize_controls(const AnnealingProblem& problem,
                                     const OptimizationSpec& spec) {
  const int n_params = static_cast<int>(spec.free_parameters.size());
  if (n_params == 0)
    throw OptimizeError("optimize_controls: no free parameters requested");
  if (spec.bound <= 0.0) throw OptimizeError("optimize_controls: bound <= 0");
  for (const auto& [ci, hi] : spec.free_parameters)
    if (ci < 0 || ci >= static_cast<int>(problem.controls.size()) || hi < 0)
      throw OptimizeError("optimize_controls: bad free-parameter index");

  // One mutable copy; harmonics arrays sized up front so the commutator
  // algebra (which depends only on the operator content) is shared across
  // all evaluations.
  AnnealingProblem work = problem;
  for (const auto& [ci, hi] : spec.free_parameters)
    if (static_cast<int>(work.controls[ci].harmonics.size()) <= hi)
      work.controls[ci].harmonics.resize(hi + 1, 0.0);

  EvolutionOptions evolution = spec.evolution;
  if (!evolution.algebra)
    evolution.algebra = std::make_shared<CommutatorAlgebra>(
        path_operators(work), std::max(1, evolution.ell));

  const bool fast = work.schedule.mode == ScheduleMode::FastLimit;
  OptimizationResult result;
  auto objective = [&](const Eigen::VectorXd& betas) {
    for (int i = 0; i < n_params; ++i) {
      const auto& [ci, hi] = spec.free_parameters[i];
      work.controls[ci].harmonics[hi] = betas(i);
    }
    try {
      const EvolutionResult er = fast ? evolve_fast_limit(work, evolution)
                                      : evolve_cd(work, evolution);
      return 1.0 - er.fidelity;
    } catch (const std::exception& err) {
      std::string msg = "evolution failed at beta = [";
      for (int i = 0; i < n_params; ++i)
        msg += (i ? ", " : "") + std::to_string(betas(i));
      throw OptimizeError(msg + "]: " + err.what());
    }
  };

  const Eigen::VectorXd lower = Eigen::VectorXd::Constant(n_params, -spec.bound);
  const Eigen::VectorXd upper = Eigen::VectorXd::Constant(n_params, spec.bound);
  PowellOptions popts;
  popts.tol = spec.tol;
  popts.line_tol = spec.line_tol;
  popts.max_iterations = spec.max_iterations;

  std::vector<Eigen::VectorXd> seeds =
      restart_seeds(n_params, spec.bound, spec.restarts, spec.seed);
  for (const auto& extra : spec.extra_seeds) {
    if (static_cast<int>(extra.size()) != n_params)
      throw OptimizeError("extra seed has the wrong number of parameters");
    Eigen::VectorXd v(n_params);
    for (int i = 0; i < n_params; ++i)
      v(i) = std::clamp(extra[i], -spec.bound, spec.bound);
    seeds.push_back(std::move(v));
  }

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_betas = Eigen::VectorXd::Zero(n_params);
  for (const Eigen::VectorXd& x0 : seeds) {
    const PowellResult pr = powell_minimize(objective, x0, lower, upper, popts);
    RestartRecord rec;
    rec.start.assign(x0.data(), x0.data() + n_params);
    rec.betas.assign(pr.x.data(), pr.x.data() + n_params);
    rec.fidelity = 1.0 - pr.f;
    rec.evaluations = pr.evaluations;
    result.evaluation_count += pr.evaluations;
    result.restarts.push_back(std::move(rec));
    if (pr.f < best) {
      best = pr.f;
      best_betas = pr.x;
    }
    if (best < spec.stop_infidelity) break;
  }

  // Freeze the reported fidelity to a re-evaluation at the best point.
  const double f_final = objective(best_betas);
  ++result.evaluation_count;
  result.best_betas.assign(best_betas.data(), best_betas.data() + n_params);
  result.best_fidelity = 1.0 - f_final;
  return result;
}

BetaScanResult beta_scan(const AnnealingProblem& problem, int control_a,
                         int control_b, double lo, double hi, int points,
                         const EvolutionOptions& evolution) {
  if (points < 3) throw OptimizeError("beta_scan needs at least 3 grid points");
  if (control_a == control_b) throw OptimizeError("beta_scan needs two controls");
  AnnealingProblem work = problem;
  for (int ci : {control_a, control_b}) {
    if (ci < 0 || ci >= static_cast<int>(work.controls.size()))
      throw OptimizeError("beta_scan: control index out of range");
    if (work.controls[ci].harmonics.empty())
      work.controls[ci].harmonics.resize(1, 0.0);
  }
  EvolutionOptions opts = evolution;
  if (!opts.algebra)
    opts.algebra = std::make_shared<CommutatorAlgebra>(path_operators(work),
                                                       std::max(1, opts.ell));
  const bool fast = work.schedule.mode == ScheduleMode::FastLimit;

  BetaScanResult result;
  result.axis1.resize(points);
  result.axis2.resize(points);
  for (int i = 0; i < points; ++i) {
    const double v = lo + (hi - lo) * i / (points - 1);
    result.axis1[i] = v;
    result.axis2[i] = v;
  }
  result.fidelity.resize(points, points);
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j) {
      work.controls[control_a].harmonics[0] = result.axis1[i];
      work.controls[control_b].harmonics[0] = result.axis2[j];
      const EvolutionResult er =
          fast ? evolve_fast_limit(work, opts) : evolve_cd(work, opts);
      result.fidelity(i, j) = er.fidelity;
    }
  return result;
}

}  // namespace cdpath
