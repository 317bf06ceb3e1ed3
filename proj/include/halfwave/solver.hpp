#ifndef HALFWAVE_SOLVER_HPP
#define HALFWAVE_SOLVER_HPP

// Pseudospectral time integrator for
//   i du/dt + (-Lap)^{1/2} u = |u|^p,   u(0) = eps * f,
// advanced as du/dt = i (-Lap)^{1/2} u - i |u|^p with the linear phase
// applied exactly in frequency space and the nonlinearity by a Lawson-RK4
// stage (4th order; the pure linear flow is exact and unitary).  Blowup is
// detected by a sup-norm threshold and confirmed by a (dt/2, N*2) rerun.

#include <string>
#include <utility>
#include <vector>

#include "halfwave/grid.hpp"
#include "halfwave/testfn.hpp"

namespace halfwave::solver {

struct SimConfig {
  GridSpec grid;
  double p = 2.0;                  // nonlinearity power, > 1
  double epsilon = 0.1;            // data amplitude
  std::string profile = "gaussian";  // "gaussian" or "lorentzian"
  double dt = 1e-3;
  double t_max = 10.0;
  double blowup_threshold = 1e6;   // sup-norm threshold M
  int snapshot_stride = 0;         // 0 = keep no snapshots
  bool linear_only = false;        // drop the nonlinearity (diagnostics)
  bool dealias = true;             // 2/3-rule mask on the nonlinear term
  bool confirm = true;             // run the (dt/2, N*2) confirmation
  double confirm_tol = 0.05;       // max relative drift of T_num

  void validate() const;
};

struct SolutionTrace {
  SimConfig config;
  std::vector<double> times;       // strictly increasing, starts at 0
  std::vector<double> sup_norms;
  std::vector<double> l2_norms;
  std::vector<double> snapshot_times;
  std::vector<ScalarField> snapshots;
};

enum class BlowupStatus { blew_up, survived_to_tmax, unresolved };

const char* to_string(BlowupStatus status);

struct BlowupResult {
  BlowupStatus status = BlowupStatus::survived_to_tmax;
  double t_num = 0.0;            // last time with sup_norm < threshold
  double resolution_check = 0.0; // relative change of t_num under refinement
};

/// u0 = eps * f on the grid, with Re f = 0 and -Im f > 0 pointwise.
/// Profiles: gaussian  f = -i exp(-|x|^2)
///           lorentzian f = -i (1+|x|^2)^{-(n+1)}.
ScalarField make_initial_data(const SimConfig& config);

/// Exact free flow e^{i t (-Lap)^{1/2}} u (one multiplier application);
/// t may be negative, the flow is unitary and reversible.
ScalarField linear_propagate(const ScalarField& u, double t);

/// Advance to t_max or blowup.  Deterministic for a fixed config.
std::pair<SolutionTrace, BlowupResult> integrate(const SimConfig& config);

/// |LHS - RHS| of the weak-form identity paired with phi_r:
///   i Int u0 phi_r(0,.) + IntInt |u|^p phi_r
///     = IntInt u (-i d_t phi_r + (-Lap)^{1/2} phi_r),
/// with space integrals by the periodic trapezoid rule, the time integral
/// by the trapezoid rule over snapshots, and (-Lap)^{1/2} phi_r by the
/// spectral engine.  Requires snapshots covering [0, T] and r+1 <= T.
/// In linear_only traces the |u|^p term is dropped from both sides.
double weak_form_residual(const SolutionTrace& trace, double r, double T);

/// RMS over interior snapshot times of the grid L2 norm of
///   (d_tt - Lap) Im u + d_t(|u|^p),
/// time derivatives by central differences on the snapshot stride and the
/// Laplacian by the spectral multiplier -|xi|^2.
double wave_residual(const SolutionTrace& trace);

}  // namespace halfwave::solver

#endif
