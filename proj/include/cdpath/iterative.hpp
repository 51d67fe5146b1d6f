#pragma once

// Approximate ground-state protocol: evolve with the infinite-temperature CD
// protocol, reweight the action with the evolved trajectory, re-evolve, and
// repeat to convergence.

#include <vector>

#include "cdpath/dynamics.hpp"

namespace cdpath {

struct IterationRecord {
  int iteration = 0;
  double fidelity = 0.0;
  double max_action_delta = 0.0;  // vs previous iteration; NaN at iteration 0
  bool converged = false;
  std::shared_ptr<Trajectory> trajectory;
};

struct IterativeOptions {
  int ell = 1;
  int max_iters = 20;
  double conv_tol = 1e-6;
  int steps = 0;  // evolution grid; >= 500 points recommended
};

// Iteration 0 runs the InfiniteT protocol; iteration k >= 1 evolves with the
// stored states of iteration k-1 as the inner-product weight. Stops when
// |F_k - F_{k-1}| < conv_tol or after max_iters evolutions. Non-convergence
// is reported through the record list, not an exception.
std::vector<IterationRecord> iterative_gs_protocol(
    const AnnealingProblem& problem, const IterativeOptions& options);

}  // namespace cdpath
