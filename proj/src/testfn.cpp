#include "halfwave/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "halfwave/quadrature.hpp"
#include "halfwave/specfun.hpp"

namespace halfwave::testfn {

TestFunctionParams TestFunctionParams::make(int n, double r, int rho_order) {
  TestFunctionParams p;
  p.n = n;
  p.C0 = specfun::c0(n);
  p.r = r;
  p.rho_order = rho_order > 0 ? rho_order : n + 2;
  p.validate();
  return p;
}

void TestFunctionParams::validate() const {
  if (n < 1) throw std::invalid_argument("TestFunctionParams: n must be >= 1");
  if (C0 != specfun::c0(n)) {
    throw std::invalid_argument("TestFunctionParams: C0 must equal c0(n)");
  }
  if (!(r >= 0.0)) throw std::invalid_argument("TestFunctionParams: r must be >= 0");
  if (rho_order < n + 2) {
    throw std::invalid_argument("TestFunctionParams: rho_order must be >= n+2");
  }
}

double eta_w(const TestFunctionParams& p, double w) {
  const double base = 1.0 + w;
  return std::pow(base, -0.5 * (p.n + 1)) - p.C0 * std::pow(base, -0.5 * (p.n + 2));
}

double eta_w_prime(const TestFunctionParams& p, double w) {
  const double base = 1.0 + w;
  return -0.5 * (p.n + 1) * std::pow(base, -0.5 * (p.n + 3)) +
         p.C0 * 0.5 * (p.n + 2) * std::pow(base, -0.5 * (p.n + 4));
}

double eta0(const TestFunctionParams& p, double radius2) {
  return eta_w(p, radius2);
}

double eta(const TestFunctionParams& p, double t, double radius2) {
  return eta_w(p, t * t + radius2);
}

namespace {

double binomial(int a, int b) {
  if (b < 0 || b > a) return 0.0;
  b = std::min(b, a - b);
  double r = 1.0;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

// Smoothstep of order m: S(0)=0, S(1)=1 with m flat derivatives at both
// ends; S vanishes like u^{m+1} at u = 0.  Evaluated with the u^{m+1}
// factor pulled out so there is no cancellation near the flat end, and
// 1 - S obtained through the symmetry S(1-u) = 1 - S(u).
double smoothstep(int m, double u) {
  double poly = 0.0;
  for (int j = m; j >= 0; --j) {
    const double c = binomial(m + j, j) * binomial(2 * m + 1, m - j) *
                     ((j % 2 == 0) ? 1.0 : -1.0);
    poly = poly * u + c;
  }
  return poly * std::pow(u, m + 1);
}

// S'_m(u) = (2m+1) C(2m, m) (u(1-u))^m, exact at both edges.
double smoothstep_prime(int m, double u) {
  return (2 * m + 1) * binomial(2 * m, m) * std::pow(u * (1.0 - u), m);
}

}  // namespace

double rho(const TestFunctionParams& p, double tau) {
  if (tau <= 0.5) return 1.0;
  if (tau >= 1.0) return 0.0;
  // 1 - S(2 tau - 1) = S(2 - 2 tau), which vanishes cleanly at tau = 1
  return smoothstep(p.rho_order - 1, 2.0 - 2.0 * tau);
}

double rho_prime(const TestFunctionParams& p, double tau) {
  if (tau <= 0.5 || tau >= 1.0) return 0.0;
  return -2.0 * smoothstep_prime(p.rho_order - 1, 2.0 - 2.0 * tau);
}

double phi_r(const TestFunctionParams& p, double t, double radius2) {
  const double scale = p.r + 1.0;
  const double tau = t / scale;
  if (tau >= 1.0) return 0.0;
  const double w = (t * t + radius2) / (scale * scale);
  return rho(p, tau) * eta_w(p, w);
}

double psi_r(const TestFunctionParams& p, double t, double radius2) {
  const double scale = p.r + 1.0;
  const double w = (t * t + radius2) / (scale * scale);
  if (w == 0.0) return 0.0;
  const double lo = std::pow(w, 0.5 * (p.n + 1) / p.n);
  const double hi = std::pow(w, -0.25 / p.n);
  return std::min(lo, hi) * phi_r(p, t, radius2);
}

double chi_r(const TestFunctionParams& p, double t) {
  return t < p.r + 1.0 ? 1.0 : 0.0;
}

double dphi_r_dt(const TestFunctionParams& p, double t, double radius2) {
  const double scale = p.r + 1.0;
  const double tau = t / scale;
  if (tau >= 1.0) return 0.0;
  const double w = (t * t + radius2) / (scale * scale);
  return rho_prime(p, tau) / scale * eta_w(p, w) +
         rho(p, tau) * eta_w_prime(p, w) * 2.0 * t / (scale * scale);
}

fraclap::RadialProfile eta_profile(const TestFunctionParams& p, double t) {
  fraclap::RadialProfile profile;
  profile.t = t;
  profile.terms.push_back({1.0, static_cast<double>(p.n + 1)});
  profile.terms.push_back({-p.C0, static_cast<double>(p.n + 2)});
  return profile;
}

fraclap::QuadratureResult frac_lap_phi_r(const TestFunctionParams& p, double t,
                                         double radius,
                                         const fraclap::QuadratureOptions& opts) {
  const double scale = p.r + 1.0;
  const double tau = t / scale;
  const double rho_val = rho(p, tau);
  fraclap::QuadratureResult out{};
  out.converged = true;
  if (rho_val == 0.0) return out;
  // (-Lap)^{1/2}[ f(./(r+1)) ](x) = (r+1)^{-1} ((-Lap)^{1/2} f)(x/(r+1))
  const auto profile = eta_profile(p, tau);
  auto res = fraclap::quadrature_radial(
      p.n, [&](double rr) { return profile(rr); }, radius / scale, 0.5, opts);
  res.value *= rho_val / scale;
  res.error *= rho_val / scale;
  res.gross *= rho_val / scale;
  return res;
}

namespace {

// Log-spaced radii; level 1 interleaves midpoints so the refined set is a
// superset of the base set (the fitted sup can only grow).
std::vector<double> log_samples(double lo, double hi, int count, int level) {
  const int m = level == 0 ? count : 2 * count - 1;
  std::vector<double> out;
  out.reserve(m);
  const double la = std::log10(lo), lb = std::log10(hi);
  for (int i = 0; i < m; ++i) {
    out.push_back(std::pow(10.0, la + (lb - la) * i / (m - 1)));
  }
  return out;
}

struct FitAccumulator {
  double fitted = 0.0;
  std::array<double, 3> worst{0.0, 0.0, 0.0};
  long count = 0;
  long unresolved = 0;

  void add(double ratio, double t, double x) {
    ++count;
    if (ratio > fitted) {
      fitted = ratio;
      worst = {t, x, 0.0};
    }
  }
};

EstimateVerdict finish(const std::string& id, const FitAccumulator& base,
                       const FitAccumulator& refined, double drift_limit) {
  EstimateVerdict v;
  v.estimate_id = id;
  v.fitted_constant = refined.fitted;
  v.sample_count = refined.count;
  v.max_ratio_location = refined.worst;
  v.unresolved_count = base.unresolved + refined.unresolved;
  v.refinement_drift =
      base.fitted > 0.0 ? (refined.fitted - base.fitted) / base.fitted : 0.0;
  v.pass = std::isfinite(v.fitted_constant) && v.unresolved_count == 0 &&
           v.refinement_drift <= drift_limit;
  return v;
}

}  // namespace

EstimateVerdict verify_lemma14(int n, double q, const VerifierOptions& opts) {
  if (!(q > 0.0)) throw std::invalid_argument("verify_lemma14: q must be > 0");
  const auto profile = fraclap::RadialProfile::single(q);
  auto rhs = [&](double x) {
    const double base = 1.0 + x * x;
    if (q < n) return std::pow(base, -0.5 * (q + 1.0));
    if (q == n) {
      return std::pow(base, -0.5 * (n + 1)) * (1.0 + std::log1p(std::abs(x)));
    }
    return std::pow(base, -0.5 * (n + 1));
  };

  FitAccumulator acc[2];
  for (int level = 0; level < 2; ++level) {
    std::vector<double> xs = log_samples(1e-2, 1e3, opts.samples, level);
    xs.insert(xs.begin(), 0.0);
    for (double x : xs) {
      const double r = rhs(x);
      fraclap::QuadratureOptions qopts;
      qopts.rel_tol = opts.quad_rel_tol;
      qopts.abs_tol = 0.02 * r;
      qopts.max_evaluations = opts.max_evaluations;
      const auto lhs = fraclap::quadrature_radial(
          n, [&](double rr) { return profile(rr); }, x, 0.5, qopts);
      if (lhs.error > 0.1 * r) {
        ++acc[level].unresolved;
        continue;
      }
      acc[level].add(std::abs(lhs.value) / r, 0.0, x);
    }
  }
  return finish("lemma14_q" + std::to_string(q), acc[0], acc[1],
                opts.drift_limit);
}

EstimateVerdict verify_lemma23(int n, double q, const VerifierOptions& opts) {
  if (!(q > 0.0)) throw std::invalid_argument("verify_lemma23: q must be > 0");
  const double fractions[3] = {0.0, 0.5, 1.0};
  FitAccumulator acc[2];
  for (int level = 0; level < 2; ++level) {
    for (double t : log_samples(1.0, 1e3, opts.samples, level)) {
      const auto profile = fraclap::RadialProfile::single(q, t);
      for (double frac : fractions) {
        const double x = frac * t;  // hypothesis region |x| <= t
        const double rhs = std::log(4.0 * t) *
                           std::pow(1.0 + t * t + x * x, -0.5 * (q + 1.0));
        fraclap::QuadratureOptions qopts;
        qopts.rel_tol = opts.quad_rel_tol;
        qopts.abs_tol = 0.02 * rhs;
        qopts.max_evaluations = opts.max_evaluations;
        const auto lhs = fraclap::quadrature_radial(
            n, [&](double rr) { return profile(rr); }, x, 0.5, qopts);
        if (lhs.error > 0.1 * rhs) {
          ++acc[level].unresolved;
          continue;
        }
        acc[level].add(std::abs(lhs.value) / rhs, t, x);
      }
    }
  }
  return finish("lemma23_q" + std::to_string(q), acc[0], acc[1],
                opts.drift_limit);
}

double lemma23_ratio(int n, double q, double t, double x,
                     const fraclap::QuadratureOptions& opts) {
  if (!(t >= std::max(std::abs(x), 1.0))) {
    throw std::invalid_argument(
        "lemma23_ratio: hypothesis region requires t >= max(|x|, 1)");
  }
  const auto profile = fraclap::RadialProfile::single(q, t);
  const double rhs =
      std::log(4.0 * t) * std::pow(1.0 + t * t + x * x, -0.5 * (q + 1.0));
  const auto lhs = fraclap::quadrature_radial(
      n, [&](double rr) { return profile(rr); }, std::abs(x), 0.5, opts);
  return std::abs(lhs.value) / rhs;
}

EstimateVerdict verify_prop21(int n, const VerifierOptions& opts) {
  const auto params = TestFunctionParams::make(n);
  FitAccumulator acc[2];
  for (int level = 0; level < 2; ++level) {
    for (double radius : log_samples(1e-2, 1e3, opts.samples, level)) {
      for (int a = 0; a < opts.angles; ++a) {
        // direction in the (t, |x|) quarter-plane
        const double alpha = 0.5 * std::numbers::pi * a / (opts.angles - 1);
        const double t = radius * std::cos(alpha);
        const double x = radius * std::sin(alpha);
        const double w = radius * radius;
        const double rhs =
            std::min(radius, std::pow(1.0 + w, -0.5 * (n + 1)));
        const auto profile = eta_profile(params, t);
        fraclap::QuadratureOptions qopts;
        qopts.rel_tol = opts.quad_rel_tol;
        qopts.abs_tol = 0.02 * rhs;
        qopts.max_evaluations = opts.max_evaluations;
        const auto lhs = fraclap::quadrature_radial(
            n, [&](double rr) { return profile(rr); }, x, 0.5, qopts);
        if (lhs.error > 0.1 * rhs) {
          ++acc[level].unresolved;
          continue;
        }
        acc[level].add(std::abs(lhs.value) / rhs, t, x);
      }
    }
  }
  return finish("prop21", acc[0], acc[1], opts.drift_limit);
}

EstimateVerdict verify_eq14(int n, double r, const VerifierOptions& opts) {
  const auto params = TestFunctionParams::make(n, r);
  const double scale = r + 1.0;
  const double exponent = -(n + 0.5) / (2.0 * (n + 1.0));
  const double power = static_cast<double>(n) / (n + 1.0);

  // tau samples: a few points on the plateau, a dense set on the cutoff
  // ramp (1/2, 1) where the rho' term dominates; level 1 halves both steps.
  auto tau_samples = [&](int level) {
    std::vector<double> taus;
    const int plateau = level == 0 ? 3 : 5;
    for (int i = 0; i < plateau; ++i) {
      taus.push_back(0.5 * i / (plateau - 1));
    }
    const int ramp = (level == 0 ? opts.samples : 2 * opts.samples);
    for (int i = 1; i <= ramp; ++i) {
      taus.push_back(0.5 + 0.48 * i / ramp);
    }
    return taus;
  };
  FitAccumulator acc[2];
  for (int level = 0; level < 2; ++level) {
    for (double tau : tau_samples(level)) {
      const double t = tau * scale;
      for (double mu : log_samples(1e-2, 4.0, opts.samples, level)) {
        const double x = mu * scale;
        const double w = tau * tau + mu * mu;
        const double psi = psi_r(params, t, x * x);
        const double rhs =
            std::pow(1.0 + w, exponent) * std::pow(psi, power) * chi_r(params, t);
        if (rhs <= 0.0) continue;
        fraclap::QuadratureOptions qopts;
        qopts.rel_tol = opts.quad_rel_tol;
        qopts.abs_tol = 0.02 * rhs / scale;
        qopts.max_evaluations = opts.max_evaluations;
        const auto flap = frac_lap_phi_r(params, t, x, qopts);
        const double lhs = std::hypot(dphi_r_dt(params, t, x * x), flap.value);
        if (flap.error > 0.1 * rhs / scale) {
          ++acc[level].unresolved;
          continue;
        }
        acc[level].add(lhs * scale / rhs, t, x);
      }
    }
  }
  return finish("eq14_r" + std::to_string(r), acc[0], acc[1], opts.drift_limit);
}

Eq17Check eq17_check(int n, double R, const VerifierOptions& opts) {
  const double scale = R + 1.0;
  Eq17Check out;
  double fitted[2] = {0.0, 0.0};
  for (int level = 0; level < 2; ++level) {
    for (double radius : log_samples(1e-2, 10.0 * scale, opts.samples, level)) {
      for (int a = 0; a < opts.angles; ++a) {
        const double alpha = 0.5 * std::numbers::pi * a / (opts.angles - 1);
        const double t = radius * std::cos(alpha);
        const double x = radius * std::sin(alpha);
        const auto params_R = TestFunctionParams::make(n, R);
        const double phiR = phi_r(params_R, t, x * x);
        if (phiR <= 0.0) continue;  // outside the r = R support
        // K(t,x) = Int_0^R psi_r/(r+1) dr; the integrand switches branch at
        // r+1 = radius and enters the rho ramp at r = t-1 .. 2t-1.
        auto integrand = [&](double rr) {
          const auto pr = TestFunctionParams::make(n, rr);
          return psi_r(pr, t, x * x) / (rr + 1.0);
        };
        std::set<double> seeds{0.0, R};
        for (double candidate : {radius - 1.0, t - 1.0, 2.0 * t - 1.0}) {
          if (candidate > 0.0 && candidate < R) seeds.insert(candidate);
        }
        for (int k = 1; k < 8; ++k) seeds.insert(R * k / 8.0);
        const auto K =
            quad::integrate(integrand, {seeds.begin(), seeds.end()}, 1e-8,
                            1e-12, 100000);
        const double ratio = K.value / phiR;
        ++out.sample_count;
        fitted[level] = std::max(fitted[level], ratio);
        if (level == 1 && radius >= scale) {
          out.fitted_constant_regime =
              std::max(out.fitted_constant_regime, ratio);
        }
      }
    }
  }
  out.fitted_constant = fitted[1];
  out.refinement_drift =
      fitted[0] > 0.0 ? (fitted[1] - fitted[0]) / fitted[0] : 0.0;
  out.pass = std::isfinite(out.fitted_constant) &&
             out.refinement_drift <= opts.drift_limit;
  return out;
}

}  // namespace halfwave::testfn
