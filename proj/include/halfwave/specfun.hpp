#ifndef HALFWAVE_SPECFUN_HPP
#define HALFWAVE_SPECFUN_HPP

// Exact special-function evaluations used as oracles by the rest of the
// library: gamma, double factorial, the constant C0 of the eta0 profile,
// and the closed form of (-Lap)^sigma applied to (1+|x|^2)^{-q/2} at the
// origin.  All functions here are pure and thread-safe.

namespace halfwave::specfun {

/// Gamma function for positive real arguments (Lanczos approximation).
/// Relative error below 1e-13 on [0.5, 50].  Throws std::domain_error
/// for x <= 0.
double gamma(double x);

/// k!! with 0!! = 1!! = 1.  Accumulated in floating point so that large k
/// overflows to +inf instead of wrapping.  Throws for k < 0.
double double_factorial(int k);

/// C0(n) = Gamma((n+2)/2)^2 / (Gamma((n+1)/2) Gamma((n+3)/2)), in (0,1).
double c0(int n);

/// Equivalent double-factorial form of c0:
///   (pi/2)^(2(n mod 2)-1) * (1/(n+1)) * (n!!/(n-1)!!)^2.
/// Kept separate so the two routes can be checked against each other.
double c0_double_factorial_form(int n);

/// Parameters of the origin identity: dimension n, order sigma in (0,1),
/// profile decay exponent q > n.
struct FracIdentityQuery {
  int n = 1;
  double sigma = 0.5;
  double q = 2.0;
};

/// Exact value of (-Lap)^sigma [(1+|.|^2)^{-q/2}](0) on R^n:
///   2^(2 sigma) * Gamma(sigma+n/2)/Gamma(n/2) * Gamma(sigma+q/2)/Gamma(q/2).
/// Throws std::domain_error when the hypotheses (n >= 1, 0 < sigma < 1,
/// q > n) are violated.
double frac_power_at_origin(const FracIdentityQuery& query);

}  // namespace halfwave::specfun

#endif
