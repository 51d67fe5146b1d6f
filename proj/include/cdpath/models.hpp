#pragma once

// Annealing problems: the short/long-range Ising chains, the longitudinal
// transverse-field chain, the collective-spin model, the smooth lambda
// schedule, and the even-commutator extra controls.

#include <functional>
#include <span>
#include <vector>

#include "cdpath/operators.hpp"

namespace cdpath {

enum class ScheduleMode { FiniteTime, FastLimit };

struct Schedule {
  ScheduleMode mode = ScheduleMode::FastLimit;
  double tau = 1.0;  // total protocol duration, FiniteTime only
};

// lambda(t) = sin^2((pi/2) sin^2(pi t / 2 tau)) and its analytic derivative.
struct SchedulePoint {
  double lambda;
  double lambda_dot;
};
SchedulePoint lambda_schedule(double t, double tau);

// Extra control term: operator with profile sum_k beta_k sin(k pi lambda).
// The profile vanishes at both endpoints for any amplitudes.
struct ControlTerm {
  OperatorMatrix op;
  std::vector<double> harmonics;

  double profile(double lambda) const;
  double profile_derivative(double lambda) const;
};

struct AnnealingProblem {
  OperatorMatrix h0;
  OperatorMatrix h1;
  std::vector<ControlTerm> controls;
  Schedule schedule;
  StateVector initial;  // ground state of H(0) = H1
  StateVector target;   // sector-resolved ground state of H(1) = H0

  const SpinBasis& basis() const { return h0.basis(); }
};

// H(lambda) = lambda H0 + (1-lambda) H1, no controls.
OperatorMatrix annealing_hamiltonian(double lambda, const AnnealingProblem& p);

// H(lambda) plus the control terms with their sin(k pi lambda) profiles.
OperatorMatrix augmented_hamiltonian(double lambda, const AnnealingProblem& p);

// d/dlambda of the augmented Hamiltonian.
OperatorMatrix augmented_hamiltonian_derivative(double lambda,
                                                const AnnealingProblem& p);

// Decomposition H~(lambda) = sum_a c_a(lambda) K_a used by the Krylov engine:
// K = {H0, H1, control ops...}, c = {lambda, 1-lambda, profiles...}.
struct PathOperators {
  std::vector<const OperatorMatrix*> ops;
  std::function<void(double, std::span<double>, std::span<double>)> coefficients;

  std::size_t size() const { return ops.size(); }
};
PathOperators path_operators(const AnnealingProblem& p);

enum class ModelKind { ShortRangeIsing, Ltfim, LongRangeIsing, CollectiveSpin };
enum class SectorMode { Symmetric, Full };

struct ModelSpec {
  ModelKind kind = ModelKind::ShortRangeIsing;
  int sites = 4;
  double alpha = 2.0;  // long-range exponent
  double h_x = 0.0;    // LTFIM fields
  double h_z = 0.0;
  bool periodic = true;
  SectorMode sector = SectorMode::Symmetric;
  Schedule schedule;
};

// Builds H0, H1 and the initial/target ground states for one of the model
// families. Chain models are constructed in the largest symmetry sector
// compatible with the Hamiltonian unless SectorMode::Full is requested.
AnnealingProblem make_model(const ModelSpec& spec);

// Even nested commutators used as extra controls:
//   Hc1 = [H0,[H1,H0]],  Hc2 = [H1,[H1,H0]].
std::pair<OperatorMatrix, OperatorMatrix> commutator_controls(
    const OperatorMatrix& h0, const OperatorMatrix& h1);

// i [H1, H0], the first odd commutator entering the AGP.
OperatorMatrix first_commutator(const OperatorMatrix& h0,
                                const OperatorMatrix& h1);

// Named controls for the short-range GHZ problem (periodic sums).
OperatorMatrix control_yy(const SpinBasis& basis);
OperatorMatrix control_zxz(const SpinBasis& basis);

// Lowest eigenpair with a deterministic phase convention (largest-magnitude
// amplitude made real positive).
std::pair<double, StateVector> ground_state(const OperatorMatrix& h);

// Ground state restricted to the even spin-flip sector; breaks the
// ferromagnetic tie deterministically. Works for chain and Dicke bases.
std::pair<double, StateVector> even_sector_ground_state(const OperatorMatrix& h);

}  // namespace cdpath
