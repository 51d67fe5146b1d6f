#include "cdpath/iterative.hpp"

#include <cmath>
#include <limits>

namespace cdpath {

std::vector<IterationRecord> iterative_gs_protocol(
    const AnnealingProblem& problem, const IterativeOptions& options) {
  if (options.max_iters < 1)
    throw EvolutionError("iterative protocol needs max_iters >= 1");
  if (options.conv_tol <= 0.0)
    throw EvolutionError("iterative protocol needs conv_tol > 0");

  const bool fast = problem.schedule.mode == ScheduleMode::FastLimit;
  EvolutionOptions evo;
  evo.ell = options.ell;
  evo.steps = options.steps > 0 ? options.steps : (fast ? 1000 : 2000);
  evo.record_trajectory = true;
  evo.record_action = true;
  evo.algebra = std::make_shared<CommutatorAlgebra>(path_operators(problem),
                                                    std::max(1, options.ell));

  auto run = [&](WeightPolicy policy, const Trajectory* prev) {
    EvolutionOptions o = evo;
    o.weight = policy;
    o.trajectory = prev;
    return fast ? evolve_fast_limit(problem, o) : evolve_cd(problem, o);
  };

  std::vector<IterationRecord> records;
  EvolutionResult current = run(WeightPolicy::InfiniteT, nullptr);
  IterationRecord rec0;
  rec0.iteration = 0;
  rec0.fidelity = current.fidelity;
  rec0.max_action_delta = std::numeric_limits<double>::quiet_NaN();
  rec0.trajectory = current.states;
  records.push_back(rec0);

  std::vector<TrajectoryPoint> prev_actions = current.trajectory;
  while (static_cast<int>(records.size()) < options.max_iters) {
    EvolutionResult next =
        run(WeightPolicy::ProvidedTrajectory, current.states.get());
    IterationRecord rec;
    rec.iteration = static_cast<int>(records.size());
    rec.fidelity = next.fidelity;
    double dmax = 0.0;
    const std::size_t n =
        std::min(prev_actions.size(), next.trajectory.size());
    for (std::size_t i = 0; i < n; ++i)
      dmax = std::max(dmax,
                      std::abs(next.trajectory[i].action - prev_actions[i].action));
    rec.max_action_delta = dmax;
    rec.trajectory = next.states;
    rec.converged =
        std::abs(rec.fidelity - records.back().fidelity) < options.conv_tol;
    records.push_back(rec);
    prev_actions = next.trajectory;
    current = std::move(next);
    if (records.back().converged) break;
  }
  return records;
}

}  // namespace cdpath
