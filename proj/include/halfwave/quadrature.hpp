#ifndef HALFWAVE_QUADRATURE_HPP
#define HALFWAVE_QUADRATURE_HPP

// Small self-contained adaptive Gauss-Kronrod (7-15) integrator used by the
// singular-integral fractional-Laplacian engine and the scaling-parameter
// quadratures.  Global adaptivity: the interval with the largest error
// estimate is bisected until the accumulated estimate meets the target.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace halfwave::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;   // accumulated error estimate
  double gross = 0.0;   // integral of |f|, for cancellation-aware tolerances
  bool converged = false;
  std::size_t evaluations = 0;
};

namespace detail {

// Kronrod-15 abscissae/weights and the embedded Gauss-7 weights (QUADPACK).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
  double a, b;
  double value;
  double error;
  double gross;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel evaluate_panel(const F& f, double a, double b, std::size_t& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv[15];
  // index mapping: j = 0..14 over nodes -xgk[0] .. +xgk[0]
  double result_kronrod = 0.0;
  double result_gauss = 0.0;
  double result_abs = 0.0;
  const double fc = f(center);
  ++evals;
  fv[7] = fc;
  result_kronrod += kWgk[7] * fc;
  result_gauss += kWg[3] * fc;
  result_abs += kWgk[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    evals += 2;
    fv[i] = f1;
    fv[14 - i] = f2;
    result_kronrod += kWgk[i] * (f1 + f2);
    result_abs += kWgk[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) {  // Gauss nodes sit at the odd Kronrod indices
      result_gauss += kWg[i / 2] * (f1 + f2);
    }
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = result_kronrod * half;
  p.gross = result_abs * std::abs(half);
  // QUADPACK-style rescaled error estimate
  const double raw = std::abs(result_kronrod - result_gauss) * std::abs(half);
  const double mean = result_kronrod * 0.5;
  double asc = 0.0;
  for (int j = 0; j < 15; ++j) {
    const int i = std::min(j, 14 - j);
    asc += kWgk[i] * std::abs(fv[j] - mean);
  }
  asc *= std::abs(half);
  if (asc > 0.0 && raw > 0.0) {
    p.error = asc * std::min(1.0, std::pow(200.0 * raw / asc, 1.5));
  } else {
    p.error = raw;
  }
  return p;
}

}  // namespace detail

/// Integrate f over the union of the intervals given by consecutive
/// breakpoints, refining adaptively until
///   total_error <= max(abs_tol, rel_tol * |value|, floor_rel * gross)
/// or the evaluation budget is spent.
template <class F>
Result integrate(const F& f, const std::vector<double>& breakpoints,
                 double rel_tol, double abs_tol,
                 std::size_t max_evaluations = 200000,
                 double floor_rel = 1e-14) {
  Result out;
  if (breakpoints.size() < 2) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Panel> panels;
  double value = 0.0, error = 0.0, gross = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) continue;
    auto p = detail::evaluate_panel(f, breakpoints[i], breakpoints[i + 1],
                                    out.evaluations);
    value += p.value;
    error += p.error;
    gross += p.gross;
    panels.push(p);
  }
  auto target = [&] {
    return std::max({abs_tol, rel_tol * std::abs(value), floor_rel * gross});
  };
  while (error > target() && out.evaluations < max_evaluations &&
         !panels.empty()) {
    const auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {  // interval exhausted
      value += worst.value;  // keep bookkeeping consistent; cannot refine
      error += worst.error;
      break;
    }
    value -= worst.value;
    error -= worst.error;
    gross -= worst.gross;
    auto left = detail::evaluate_panel(f, worst.a, mid, out.evaluations);
    auto right = detail::evaluate_panel(f, mid, worst.b, out.evaluations);
    value += left.value + right.value;
    error += left.error + right.error;
    gross += left.gross + right.gross;
    panels.push(left);
    panels.push(right);
  }
  out.value = value;
  out.error = error;
  out.gross = gross;
  out.converged = error <= target();
  return out;
}

/// Geometric breakpoints a, a*ratio, ..., clipped at b (a, b > 0).
inline std::vector<double> geometric_breakpoints(double a, double b,
                                                 double ratio = 4.0) {
  std::vector<double> pts;
  pts.push_back(a);
  double y = a;
  while (y * ratio < b) {
    y *= ratio;
    pts.push_back(y);
  }
  pts.push_back(b);
  return pts;
}

}  // namespace halfwave::quad

#endif
