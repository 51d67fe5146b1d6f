#pragma once

// Time evolution under the counterdiabatic Hamiltonian, the infinite-speed
// limit, and fidelity bookkeeping.

#include <functional>
#include <memory>
#include <vector>

#include "cdpath/models.hpp"
#include "cdpath/operator_algebra.hpp"
#include "cdpath/operators.hpp"

namespace cdpath {

class EvolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class WeightPolicy { InfiniteT, TrueGroundState, ProvidedTrajectory };

// States stored on a lambda grid, reused as inner-product weights by the
// iterative protocol. Lookup is nearest-grid-point.
struct Trajectory {
  std::vector<double> lambdas;
  std::vector<VectorXc> states;  // normalized

  const VectorXc& nearest(double lambda) const;
};

struct EvolutionOptions {
  int ell = 1;
  int steps = 0;  // 0: defaults (2000 finite-time, 1000 fast limit), auto-scaled
  // Raise the step count automatically (and retry with more steps) until the
  // norm drift stays within 1e-6. Disable to get the exact requested count;
  // a drifting run then fails with an error advising more steps.
  bool auto_steps = true;
  WeightPolicy weight = WeightPolicy::InfiniteT;
  const Trajectory* trajectory = nullptr;  // ProvidedTrajectory weight source
  bool include_agp = true;                 // false: bare annealing
  bool record_trajectory = false;          // keep psi(lambda) on the step grid
  bool record_action = false;
  bool record_gs_overlap = false;
  // Optional shared commutator algebra (built once per problem/control set).
  std::shared_ptr<const CommutatorAlgebra> algebra;
  // Test hook: supply the counterdiabatic generator directly.
  std::function<MatrixXc(double)> agp_override;
};

struct TrajectoryPoint {
  double x = 0.0;  // t for finite-time runs, lambda in the fast limit
  double action = 0.0;
  double gs_overlap = 0.0;
};

struct EvolutionResult {
  StateVector final_state;
  double fidelity = 0.0;
  std::vector<TrajectoryPoint> trajectory;
  std::shared_ptr<Trajectory> states;  // set when record_trajectory
  double norm_drift = 0.0;
  int steps_used = 0;
};

// Integrates i d|psi>/dt = [H~(lambda(t)) + lambda_dot A_lambda] |psi> from
// t = 0 to tau with fixed-step RK4, rebuilding the order-ell AGP at every
// stage lambda. Step count is raised automatically to keep the norm drift
// within 1e-6.
EvolutionResult evolve_cd(const AnnealingProblem& problem,
                          const EvolutionOptions& options);

// tau -> 0 limit: integrates i d|psi>/dlambda = A_lambda |psi> over [0, 1].
EvolutionResult evolve_fast_limit(const AnnealingProblem& problem,
                                  const EvolutionOptions& options);

// |<a|b>|^2 for normalized states in a common basis.
double fidelity(const StateVector& a, const StateVector& b);

// Weight of a full-chain state inside the even spin-flip sector; diagnostic
// for parity conservation.
double even_sector_weight(const StateVector& psi);

}  // namespace cdpath
