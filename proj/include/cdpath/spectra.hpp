#pragma once

// Frequency-fitting view of the variational AGP: ground-state excitation
// data, the fitted odd polynomial, and the approximate/exact matrix-element
// ratio.

#include <vector>

#include "cdpath/agp.hpp"
#include "cdpath/operators.hpp"

namespace cdpath {

struct ExcitationDatum {
  double omega = 0.0;   // E_m - E_0
  double weight = 0.0;  // |<m|dH|0>|^2
  double ratio = 0.0;   // <m|A_approx|0> / <m|A_exact|0>
  bool ratio_defined = false;
};

// One datum per excited state with coupling weight above 1e-12. Errors on a
// degenerate ground state.
std::vector<ExcitationDatum> gs_excitation_data(const OperatorMatrix& h,
                                                const OperatorMatrix& dh);

struct CurvePoint {
  double omega = 0.0;
  double f = 0.0;        // fitted polynomial f(omega) = -sum alpha_k w^{2k-1}
  double omega_f = 0.0;  // omega * f(omega); 1 for the exact gauge potential
};

struct FitCurveResult {
  std::vector<ExcitationDatum> data;
  std::vector<double> alphas;      // monomial coefficients of the AGP
  std::vector<CurvePoint> curve;   // log grid over [0.5 min w, 2 max w]
};

// Fills the matrix-element ratios of an order-ell AGP against the exact one
// and samples the fitted polynomial. Data with a vanishing exact element but
// nonvanishing approximate one are flagged (ratio undefined).
FitCurveResult fit_curve(const AGPSolution& approx, const OperatorMatrix& exact,
                         const OperatorMatrix& h, const OperatorMatrix& dh);

}  // namespace cdpath
