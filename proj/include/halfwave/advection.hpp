#ifndef HALFWAVE_ADVECTION_HPP
#define HALFWAVE_ADVECTION_HPP

// Exact 1D oracle: the semilinear advection equation
//   dw/dt + dw/dx = w^p,  w(0) = w0 >= 0,
// solved in closed form along characteristics,
//   w(t,x) = ( w0(x-t)^{-(p-1)} - (p-1) t )^{-1/(p-1)},
// with exact blowup time T* = ((p-1) (sup w0)^{p-1})^{-1}.  This is the one
// setting with an exact lifespan, used to cross-check the PDE solver's
// measured lifespans and the eps^{-(p-1)} scaling law.

#include <functional>
#include <string>
#include <vector>

#include "halfwave/grid.hpp"
#include "halfwave/solver.hpp"

namespace halfwave::advection {

struct AdvectionProblem {
  double p = 2.0;
  std::function<double(double)> w0;  // nonnegative, bounded
  double sup_w0 = 0.0;               // sup of w0 (exact, supplied by builder)

  /// Named profile scaled by eps: "const", "sech2", "gaussian", "lorentzian"
  /// (all with unit peak, so sup_w0 = eps).
  static AdvectionProblem make(double p, const std::string& profile,
                               double eps);
};

/// Closed-form solution; throws std::domain_error at or beyond blowup.
double exact_solution(const AdvectionProblem& problem, double t, double x);

/// T* = ((p-1) (sup w0)^{p-1})^{-1}; +inf when w0 == 0.
double exact_lifespan(const AdvectionProblem& problem);

struct AdvectionRunOptions {
  double dt = 5e-4;
  double t_max = 50.0;
  double blowup_threshold = 1e6;
  bool confirm = true;
  double confirm_tol = 0.02;
};

/// Spectral transport (exact phase) + Lawson-RK4 on the nonlinearity.
solver::BlowupResult integrate_advection(const AdvectionProblem& problem,
                                         const GridSpec& grid,
                                         const AdvectionRunOptions& opts = {});

struct ScalingCheck {
  double analytic_slope = 0.0;  // regression slope of log T* vs log eps
  double numeric_slope = 0.0;   // same for the measured lifespans
  double expected_slope = 0.0;  // -(p-1)
  std::vector<double> epsilons;
  std::vector<double> exact_lifespans;
  std::vector<double> numeric_lifespans;
};

/// log T vs log eps regression for the closed form (slope -(p-1) exactly)
/// and for measured lifespans of the same sweep.
ScalingCheck eq8_scaling_check(double p, const std::string& profile,
                               const std::vector<double>& epsilons,
                               const GridSpec& grid,
                               const AdvectionRunOptions& opts = {});

}  // namespace halfwave::advection

#endif
