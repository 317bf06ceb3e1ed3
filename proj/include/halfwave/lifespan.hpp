#ifndef HALFWAVE_LIFESPAN_HPP
#define HALFWAVE_LIFESPAN_HPP

// Experiment harness: eps-sweeps over the PDE solver, T_num(eps) extraction,
// fits against the three lifespan laws (critical exponential, subcritical
// power, 1D advection power), and the ordinary-differential-inequality
// diagnostic along numerical solutions.

#include <string>
#include <vector>

#include "halfwave/solver.hpp"

namespace halfwave::lifespan {

enum class Law { critical_exp, subcritical_power, advection_power };

const char* to_string(Law law);

struct SweepConfig {
  std::vector<double> epsilons;  // sorted descending
  solver::SimConfig base;        // template; epsilon is overwritten per run
  Law law = Law::critical_exp;
  int parallel_width = 1;

  void validate() const;
};

struct LifespanRecord {
  double epsilon = 0.0;
  double t_num = 0.0;
  solver::BlowupStatus status = solver::BlowupStatus::unresolved;
  double dt = 0.0;
  int N = 0;
  double L = 0.0;
  double threshold = 0.0;
  double drift = 0.0;
};

/// One record per epsilon, ordered as given; per-run unresolved flags are
/// recorded, the sweep itself never aborts.
std::vector<LifespanRecord> run_sweep(const SweepConfig& config);

struct FitResult {
  std::string model;
  double c = 0.0;        // slope-like parameter (C or the power-law exponent)
  double offset = 0.0;   // intercept a
  double r2 = 0.0;       // goodness of the linearized regression
  std::vector<double> residuals;
  bool degenerate = false;  // eps range below one decade
  bool envelope_holds = false;  // every record under the inflated bound
};

/// log T = a + C eps^{-1/n}; envelope check inflates a by the max residual.
FitResult fit_critical(const std::vector<LifespanRecord>& records, int n);

/// log T = a + m log eps, slope compared with 1/(n - 1/(p-1)).
FitResult fit_subcritical(const std::vector<LifespanRecord>& records, int n,
                          double p);

/// Plain power law log T = a + m log eps (the 1D sharp comparison fit).
FitResult fit_power(const std::vector<LifespanRecord>& records);

/// Theoretical subcritical exponent 1/(n - 1/(p-1)).
double subcritical_exponent(int n, double p);

struct OdiTrace {
  std::vector<double> r;        // scaling-parameter grid, r[0] = 0
  std::vector<double> y;        // y(r)  = IntInt |u|^{(n+1)/n} psi_r
  std::vector<double> Y;        // Y(R)  = Int_0^R y/(r+1) dr
  std::vector<double> Yp;       // centered differences of Y on the r grid
  double fitted_c = 0.0;        // minimal C with eps + Y <= C ((R+1)Y')^{n/(n+1)}
  long excluded = 0;            // grid points with Y' <= 0 (quadrature noise)
  double fubini_gap = 0.0;      // |r-first vs (t,x)-first evaluation of Y(R_max)|
  double closing_margin = 0.0;  // worst margin of the integrated lower bound
  bool closing_holds = false;
  double max_yp_consistency = 0.0;  // |Y' - y/(r+1)| / scale, quality metric
};

/// ODI diagnostic along a resolved trace with snapshots on [0, T].
OdiTrace odi_diagnostic(const solver::SolutionTrace& trace, double epsilon,
                        const std::vector<double>& r_grid);

/// Geometric r grid {0, r1, ..., R_max} suitable for odi_diagnostic.
std::vector<double> default_r_grid(double r_max, int points);

/// CSV with header epsilon,p,n,T_num,status,dt,N,L,M,drift; byte-stable.
void export_records_csv(const std::vector<LifespanRecord>& records, double p,
                        int n, const std::string& path);

}  // namespace halfwave::lifespan

#endif
