#pragma once

// Six-pulse Floquet realization of the augmented counterdiabatic Hamiltonian:
// pulse synthesis, Magnus coefficients of the pulse product, and verification
// against the target generator.
//
// Conventions: one period applies the pulses e^{-i eps_1 H0}, e^{-i eps_2 H1},
// ... in that order (pulse 1 first), so the period propagator is
//   U = e^{-i eps_6 H1} e^{-i eps_5 H0} ... e^{-i eps_1 H0},
// and the Floquet Hamiltonian H_F = i log(U) / T expands as
//   H_F T = f0 H0 + f1 H1 - i f01 [H1,H0]
//           + f010 [H0,[H1,H0]] + f110 [H1,[H1,H0]] + O(eps^4).

#include <array>
#include <vector>

#include "cdpath/operators.hpp"

namespace cdpath {

class FloquetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MagnusCoefficients {
  double f0 = 0.0;
  double f1 = 0.0;
  double f01 = 0.0;
  double f010 = 0.0;
  double f110 = 0.0;
};

struct PulseSequence {
  std::array<double, 6> strengths{};  // eps_i = T^{1/3} eta_i
  double period = 0.0;
  // Set when alpha * lambda_dot < 0 forced absolute values under the square
  // roots; the synthesized first-order term then has the wrong sign.
  bool sign_flagged = false;
};

// Exact Magnus/BCH coefficients of the six-pulse product through third order,
// accumulated in the free algebra on {H0, H1} truncated at word length 3.
MagnusCoefficients magnus_coefficients(const std::array<double, 6>& eps);

// Pulse strengths matching, as T -> 0,
//   f0 -> lambda T, f1 -> (1-lambda) T, f01 -> -alpha1 lambda_dot T,
//   f010 -> beta1 T, f110 -> beta2 T,
// where alpha1 is the first-order AGP coefficient (A = i alpha1 [H1,H0] at
// this order, so the matched CD term is -i alpha1 lambda_dot [H1,H0]).
// Requires beta1, beta2 > 0 and lambda_dot >= 0.
PulseSequence pulse_strengths(double lambda, double lambda_dot, double alpha1,
                              double beta1, double beta2, double period);

// Ordered product of the pulse exponentials (pulse 1 applied first).
OperatorMatrix floquet_period_propagator(const PulseSequence& seq,
                                         const OperatorMatrix& h0,
                                         const OperatorMatrix& h1);

struct FloquetMatchPoint {
  double period = 0.0;
  double error = 0.0;  // || i log(U)/T - H_CD || (spectral norm)
  MagnusCoefficients targets;  // Magnus coefficients of the pulses, over T
};

// For each period: synthesize pulses, build the propagator, and compare the
// extracted Floquet Hamiltonian against
//   H_CD = lambda H0 + (1-lambda) H1 + i alpha1 lambda_dot [H1,H0]
//          + beta1 [H0,[H1,H0]] + beta2 [H1,[H1,H0]].
// Periods with ||H_CD|| T >= pi are rejected (log branch ambiguity).
std::vector<FloquetMatchPoint> verify_floquet_match(
    double lambda, double lambda_dot, double alpha1, double beta1, double beta2,
    const OperatorMatrix& h0, const OperatorMatrix& h1,
    const std::vector<double>& periods);

// Least-squares expansion of a Hermitian matrix over the operator basis
// {H0, H1, i[H1,H0], [H0,[H1,H0]], [H1,[H1,H0]]} (trace Gram system); used to
// inspect extracted Floquet Hamiltonians.
std::array<double, 5> extract_generator_components(const OperatorMatrix& m,
                                                   const OperatorMatrix& h0,
                                                   const OperatorMatrix& h1);

// Principal logarithm i log(U)/T of a unitary propagator.
OperatorMatrix floquet_hamiltonian(const OperatorMatrix& u, double period);

}  // namespace cdpath
