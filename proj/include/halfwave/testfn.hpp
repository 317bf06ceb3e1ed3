#ifndef HALFWAVE_TESTFN_HPP
#define HALFWAVE_TESTFN_HPP

// The scaled test-function family
//   eta0(x)     = (1+|x|^2)^{-(n+1)/2} - C0 (1+|x|^2)^{-(n+2)/2}
//   eta(t,x)    = same with |x|^2 -> t^2+|x|^2
//   phi_r(t,x)  = rho(t/(r+1)) eta(t/(r+1), x/(r+1))
//   psi_r(t,x)  = min{ w^{(n+1)/2n}, w^{-1/4n} } phi_r,  w = (t^2+|x|^2)/(r+1)^2
//   chi_r(t)    = [t < r+1]
// together with numerical verifiers that fit the constants of the pointwise
// fractional-derivative estimates these functions satisfy.  The constants
// are non-explicit, so the verifiers report an empirical sup of |LHS|/RHS
// and whether it is stable under sample refinement.

#include <functional>

#include "halfwave/fraclap.hpp"
#include "halfwave/verdict.hpp"

namespace halfwave::testfn {

struct TestFunctionParams {
  int n = 1;           // spatial dimension
  double C0 = 0.0;     // c0(n), cached
  double r = 0.0;      // scaling parameter
  int rho_order = 3;   // flatness order k >= n+2 of the cutoff

  static TestFunctionParams make(int n, double r = 0.0, int rho_order = 0);
  void validate() const;
};

/// eta as a function of w = t^2 + |x|^2.
double eta_w(const TestFunctionParams& p, double w);
/// d/dw of eta_w.
double eta_w_prime(const TestFunctionParams& p, double w);

double eta0(const TestFunctionParams& p, double radius2);
double eta(const TestFunctionParams& p, double t, double radius2);

/// Polynomial smoothstep cutoff: 1 on tau <= 1/2, 0 on tau >= 1, C^{k-1},
/// vanishing like (1-tau')^k at the right edge.
double rho(const TestFunctionParams& p, double tau);
double rho_prime(const TestFunctionParams& p, double tau);

double phi_r(const TestFunctionParams& p, double t, double radius2);
double psi_r(const TestFunctionParams& p, double t, double radius2);
double chi_r(const TestFunctionParams& p, double t);
/// Analytic time derivative of phi_r (product/chain rule on rho and eta).
double dphi_r_dt(const TestFunctionParams& p, double t, double radius2);

/// The eta profile at fixed time shift t as a RadialProfile (for the
/// singular-integral engine).
fraclap::RadialProfile eta_profile(const TestFunctionParams& p, double t);

/// (-Lap)^{1/2} phi_r(t, .) at |x| = radius, via the quadrature engine on
/// the unit-scale eta profile and the exact scaling law.
fraclap::QuadratureResult frac_lap_phi_r(
    const TestFunctionParams& p, double t, double radius,
    const fraclap::QuadratureOptions& opts = {});

struct VerifierOptions {
  int samples = 16;           // base radial sample count (doubled for drift)
  int angles = 4;             // (t,x) direction count where applicable
  double drift_limit = 0.10;  // pass threshold on refinement drift
  double quad_rel_tol = 1e-6;
  std::size_t max_evaluations = 400000;
};

/// |(-Lap)^{1/2}(1+.^2)^{-q/2}(x)| against the three decay branches
/// (q < n, q = n, q > n) over log-spaced |x| in [0, 1e3].
EstimateVerdict verify_lemma14(int n, double q, const VerifierOptions& opts = {});

/// |(-Lap)^{1/2}[(1+t^2+.^2)^{-q/2}](x)| <= C log(4t) (1+t^2+|x|^2)^{-(q+1)/2}
/// on t in [1, 1e3], |x| <= t.
EstimateVerdict verify_lemma23(int n, double q, const VerifierOptions& opts = {});

/// Single-sample ratio for the same estimate.  Throws std::invalid_argument
/// outside the hypothesis region t >= max(|x|, 1).
double lemma23_ratio(int n, double q, double t, double x,
                     const fraclap::QuadratureOptions& opts = {});

/// |(-Lap)^{1/2} eta(t,.)(x)| <= C min{ (t^2+|x|^2)^{1/2},
/// (1+t^2+|x|^2)^{-(n+1)/2} } over t^2+|x|^2 in [1e-4, 1e6].
EstimateVerdict verify_prop21(int n, const VerifierOptions& opts = {});

/// |-i dphi_r/dt + (-Lap)^{1/2} phi_r| * (r+1) against
/// (1+w)^{-(n+1/2)/2(n+1)} psi_r^{n/(n+1)} chi_r.
EstimateVerdict verify_eq14(int n, double r, const VerifierOptions& opts = {});

struct Eq17Check {
  double fitted_constant = 0.0;        // sup over all samples of K / phi_R
  double fitted_constant_regime = 0.0; // sup over samples with w_R >= 1
  double refinement_drift = 0.0;
  long sample_count = 0;
  bool pass = false;                   // finite + drift within limit
};

/// K(t,x) = Int_0^R psi_r/(r+1) dr <= C phi_R(t,x).  The "regime" constant
/// restricts to t^2+|x|^2 >= (R+1)^2 where only the w^{-1/4n} branch of
/// psi_r is active; there the analytic ceiling 4 applies for n = 1.
Eq17Check eq17_check(int n, double R, const VerifierOptions& opts = {});

}  // namespace halfwave::testfn

#endif
