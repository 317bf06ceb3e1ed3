#include "halfwave/advection.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "halfwave/fft.hpp"

namespace halfwave::advection {

AdvectionProblem AdvectionProblem::make(double p, const std::string& profile,
                                        double eps) {
  if (!(p > 1.0)) throw std::invalid_argument("AdvectionProblem: p must exceed 1");
  if (!(eps >= 0.0)) throw std::invalid_argument("AdvectionProblem: eps must be >= 0");
  AdvectionProblem problem;
  problem.p = p;
  problem.sup_w0 = eps;
  if (profile == "const") {
    problem.w0 = [eps](double) { return eps; };
  } else if (profile == "sech2") {
    problem.w0 = [eps](double x) {
      const double c = std::cosh(x);
      return eps / (c * c);
    };
  } else if (profile == "gaussian") {
    problem.w0 = [eps](double x) { return eps * std::exp(-x * x); };
  } else if (profile == "lorentzian") {
    problem.w0 = [eps](double x) { return eps / ((1.0 + x * x) * (1.0 + x * x)); };
  } else {
    throw std::invalid_argument("AdvectionProblem: unknown profile '" + profile +
                                "'");
  }
  return problem;
}

double exact_lifespan(const AdvectionProblem& problem) {
  if (problem.sup_w0 <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / ((problem.p - 1.0) * std::pow(problem.sup_w0, problem.p - 1.0));
}

double exact_solution(const AdvectionProblem& problem, double t, double x) {
  if (!(t < exact_lifespan(problem))) {
    throw std::domain_error("exact_solution: t is at or beyond the blowup time");
  }
  const double w0 = problem.w0(x - t);
  if (w0 == 0.0) return 0.0;  // vacuum characteristics stay at zero
  const double pm1 = problem.p - 1.0;
  const double base = std::pow(w0, -pm1) - pm1 * t;
  return std::pow(base, -1.0 / pm1);
}

namespace {

using cplx = std::complex<double>;

struct TransportWorkspace {
  GridSpec grid;
  double dt;
  double p;
  std::vector<cplx> half_shift;  // e^{-i xi dt/2}, exact transport
  std::vector<double> mask;

  TransportWorkspace(const GridSpec& g, double dt_in, double p_in)
      : grid(g), dt(dt_in), p(p_in) {
    const int N = grid.N;
    half_shift.resize(N);
    mask.resize(N);
    const int keep = N / 3;
    for (int j = 0; j < N; ++j) {
      const double xi = grid.frequency(j);
      half_shift[j] = std::exp(cplx(0.0, -0.5 * dt * xi));
      mask[j] = std::abs(grid.wavenumber(j)) <= keep ? 1.0 : 0.0;
    }
  }

  // N(w) = w^p with a clamp at zero: the true solution stays nonnegative
  // and spectral ringing must not feed pow() a negative base.
  std::vector<cplx> nonlinear_spectrum(const std::vector<cplx>& w) const {
    std::vector<cplx> nl(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      nl[i] = std::pow(std::max(w[i].real(), 0.0), p);
    }
    auto spec = fft::forward(grid, nl);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= mask[i];
    return spec;
  }

  void apply_half_shift(std::vector<cplx>& spectrum, int times) const {
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
      cplx e = half_shift[i];
      if (times == 2) e *= e;
      spectrum[i] *= e;
    }
  }
};

std::vector<cplx> lawson_step(const TransportWorkspace& ws,
                              const std::vector<cplx>& w) {
  const auto& grid = ws.grid;
  const double dt = ws.dt;
  auto w_hat = fft::forward(grid, w);
  auto ew_hat = w_hat;
  ws.apply_half_shift(ew_hat, 1);
  auto e2w_hat = w_hat;
  ws.apply_half_shift(e2w_hat, 2);
  const auto w_half = fft::inverse(grid, ew_hat);
  const auto w_full = fft::inverse(grid, e2w_hat);

  auto n1 = ws.nonlinear_spectrum(w);
  auto en1 = n1;
  ws.apply_half_shift(en1, 1);
  const auto e_k1 = fft::inverse(grid, en1);

  std::vector<cplx> stage(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    stage[i] = w_half[i] + 0.5 * dt * e_k1[i];
  }
  auto n2 = ws.nonlinear_spectrum(stage);
  const auto k2 = fft::inverse(grid, n2);
  for (std::size_t i = 0; i < w.size(); ++i) {
    stage[i] = w_half[i] + 0.5 * dt * k2[i];
  }
  auto n3 = ws.nonlinear_spectrum(stage);
  auto en3 = n3;
  ws.apply_half_shift(en3, 1);
  const auto e_k3 = fft::inverse(grid, en3);
  for (std::size_t i = 0; i < w.size(); ++i) {
    stage[i] = w_full[i] + dt * e_k3[i];
  }
  auto n4 = ws.nonlinear_spectrum(stage);

  auto combo = n1;
  ws.apply_half_shift(combo, 2);
  ws.apply_half_shift(n2, 1);
  for (std::size_t i = 0; i < combo.size(); ++i) {
    combo[i] += 2.0 * n2[i] + 2.0 * en3[i] + n4[i];
  }
  const auto incr = fft::inverse(grid, combo);
  std::vector<cplx> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[i] = w_full[i] + dt / 6.0 * incr[i];
  }
  return out;
}

struct RunOutcome {
  bool blew_up = false;
  double t_num = 0.0;
};

RunOutcome run_once(const AdvectionProblem& problem, const GridSpec& grid,
                    double dt, double t_max, double threshold) {
  grid.validate();
  if (grid.n != 1) {
    throw std::invalid_argument("integrate_advection: 1D only");
  }
  const TransportWorkspace ws(grid, dt, problem.p);
  std::vector<cplx> w(grid.size());
  for (int i = 0; i < grid.N; ++i) w[i] = problem.w0(grid.coordinate(i));
  RunOutcome out;
  const long steps = static_cast<long>(std::ceil(t_max / dt - 1e-12));
  for (long step = 1; step <= steps; ++step) {
    w = lawson_step(ws, w);
    double sup = 0.0;
    for (const auto& v : w) sup = std::max(sup, std::abs(v));
    if (!std::isfinite(sup) || sup >= threshold) {
      out.blew_up = true;
      return out;
    }
    out.t_num = step * dt;
  }
  return out;
}

double regression_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  const std::size_t m = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

solver::BlowupResult integrate_advection(const AdvectionProblem& problem,
                                         const GridSpec& grid,
                                         const AdvectionRunOptions& opts) {
  auto base = run_once(problem, grid, opts.dt, opts.t_max,
                       opts.blowup_threshold);
  solver::BlowupResult result;
  if (!base.blew_up) {
    result.status = solver::BlowupStatus::survived_to_tmax;
    result.t_num = opts.t_max;
    return result;
  }
  result.status = solver::BlowupStatus::blew_up;
  result.t_num = base.t_num;
  if (opts.confirm) {
    GridSpec fine = grid;
    fine.N *= 2;
    auto check = run_once(problem, fine, 0.5 * opts.dt, opts.t_max,
                          opts.blowup_threshold);
    if (!check.blew_up) {
      result.status = solver::BlowupStatus::unresolved;
      result.resolution_check = 1.0;
    } else {
      result.resolution_check =
          std::abs(base.t_num - check.t_num) / std::max(check.t_num, 1e-12);
      if (result.resolution_check > opts.confirm_tol) {
        result.status = solver::BlowupStatus::unresolved;
      }
    }
  }
  return result;
}

ScalingCheck eq8_scaling_check(double p, const std::string& profile,
                               const std::vector<double>& epsilons,
                               const GridSpec& grid,
                               const AdvectionRunOptions& opts) {
  if (epsilons.size() < 5) {
    throw std::invalid_argument("eq8_scaling_check: need at least 5 epsilons");
  }
  const double span = *std::max_element(epsilons.begin(), epsilons.end()) /
                      *std::min_element(epsilons.begin(), epsilons.end());
  if (std::log10(span) < 1.5) {
    throw std::invalid_argument(
        "eq8_scaling_check: epsilons must span at least 1.5 decades");
  }
  ScalingCheck check;
  check.expected_slope = -(p - 1.0);
  check.epsilons = epsilons;
  std::vector<double> log_eps, log_exact, log_num;
  for (double eps : epsilons) {
    const auto problem = AdvectionProblem::make(p, profile, eps);
    const double t_star = exact_lifespan(problem);
    AdvectionRunOptions run = opts;
    run.t_max = std::min(opts.t_max, 2.0 * t_star);
    const auto numeric = integrate_advection(problem, grid, run);
    check.exact_lifespans.push_back(t_star);
    check.numeric_lifespans.push_back(numeric.t_num);
    log_eps.push_back(std::log(eps));
    log_exact.push_back(std::log(t_star));
    log_num.push_back(std::log(numeric.t_num));
  }
  check.analytic_slope = regression_slope(log_eps, log_exact);
  check.numeric_slope = regression_slope(log_eps, log_num);
  return check;
}

}  // namespace halfwave::advection
