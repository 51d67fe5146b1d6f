#pragma once

// Derivative-free optimization of extra-control amplitudes against the final
// state fidelity, plus the two-control fidelity surface scan.

#include <functional>
#include <vector>

#include "cdpath/dynamics.hpp"
#include "cdpath/models.hpp"

namespace cdpath {

class OptimizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PowellOptions {
  double tol = 1e-6;        // stop when one full iteration decreases f by less
  double line_tol = 0.01;   // line-search resolution in parameter units
  int max_iterations = 60;
  double initial_step = 0.5;
};

struct PowellResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evaluations = 0;
  int iterations = 0;
};

// Powell's conjugate-direction minimization in a box. Line searches are
// restricted to the feasible segment (hard clipping, no penalty terms).
// Deterministic for fixed inputs.
PowellResult powell_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper,
                             const PowellOptions& options = {});

struct OptimizationSpec {
  // Which control amplitudes are free: (control index, harmonic index).
  std::vector<std::pair<int, int>> free_parameters;
  double bound = 3.0;
  int restarts = 5;
  double tol = 1e-5;
  EvolutionOptions evolution;  // ell, weight, steps
  unsigned seed = 0;           // extra restarts beyond the deterministic grid
  // Additional start points (e.g. warm starts from a neighbouring cell),
  // appended after the deterministic grid.
  std::vector<std::vector<double>> extra_seeds;
  // Skip remaining restarts once 1 - F drops below this.
  double stop_infidelity = 1e-7;
  // Line-search resolution / iteration budget handed to Powell.
  double line_tol = 0.01;
  int max_iterations = 60;
};

struct RestartRecord {
  std::vector<double> start;
  std::vector<double> betas;
  double fidelity = 0.0;
  int evaluations = 0;
};

struct OptimizationResult {
  std::vector<double> best_betas;
  double best_fidelity = 0.0;
  std::vector<RestartRecord> restarts;
  long evaluation_count = 0;
};

// Maximizes the final-state fidelity over the free amplitudes within
// |beta| <= bound, multi-restart from a deterministic seed grid that always
// contains beta = 0. The evolution mode comes from problem.schedule.
OptimizationResult optimize_controls(const AnnealingProblem& problem,
                                     const OptimizationSpec& spec);

struct BetaScanResult {
  std::vector<double> axis1, axis2;
  Eigen::MatrixXd fidelity;  // fidelity(i, j) at (axis1[i], axis2[j])
};

// Fidelity surface over a Cartesian grid of two control amplitudes
// (first harmonic of each control).
BetaScanResult beta_scan(const AnnealingProblem& problem, int control_a,
                         int control_b, double lo, double hi, int points,
                         const EvolutionOptions& evolution);

}  // namespace cdpath
