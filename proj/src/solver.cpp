#include "halfwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "halfwave/fft.hpp"

namespace halfwave::solver {

using cplx = std::complex<double>;

void SimConfig::validate() const {
  grid.validate();
  if (!(p > 1.0)) throw std::invalid_argument("SimConfig: p must exceed 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("SimConfig: epsilon must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be positive");
  if (!(t_max > 0.0)) throw std::invalid_argument("SimConfig: t_max must be positive");
  if (!(blowup_threshold > 0.0)) {
    throw std::invalid_argument("SimConfig: blowup threshold must be positive");
  }
  if (snapshot_stride < 0) {
    throw std::invalid_argument("SimConfig: snapshot_stride must be >= 0");
  }
  // The linear phase is exact, so the only time-step constraint is accuracy
  // of the nonlinear stage; keep dt * max|xi| within a generous budget.
  const double xi_max = std::numbers::pi * grid.N / (2.0 * grid.L) *
                        std::sqrt(static_cast<double>(grid.n));
  if (dt * xi_max > 1e3) {
    throw std::invalid_argument("SimConfig: dt too large for the grid's frequencies");
  }
}

const char* to_string(BlowupStatus status) {
  switch (status) {
    case BlowupStatus::blew_up: return "blew_up";
    case BlowupStatus::survived_to_tmax: return "survived_to_Tmax";
    case BlowupStatus::unresolved: return "unresolved";
  }
  return "unknown";
}

ScalarField make_initial_data(const SimConfig& config) {
  config.validate();
  std::function<double(double)> envelope;
  if (config.profile == "gaussian") {
    envelope = [](double r2) { return std::exp(-r2); };
  } else if (config.profile == "lorentzian") {
    const double n = config.grid.n;
    envelope = [n](double r2) { return std::pow(1.0 + r2, -(n + 1.0)); };
  } else {
    throw std::invalid_argument("make_initial_data: unknown profile '" +
                                config.profile + "'");
  }
  auto field = ScalarField::from_function(
      config.grid, [&](std::span<const double> x) -> cplx {
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        return cplx(0.0, -config.epsilon * envelope(r2));
      });
  // sign conditions: Re u0 = 0 and -Im u0 > 0.  Far tails may underflow to
  // zero in double precision; reject only genuine sign violations.
  bool somewhere_positive = false;
  for (const auto& v : field.values) {
    if (v.real() != 0.0 || -v.imag() < 0.0) {
      throw std::invalid_argument(
          "make_initial_data: profile violates the sign conditions");
    }
    if (-v.imag() > 0.0) somewhere_positive = true;
  }
  if (config.epsilon > 0.0 && !somewhere_positive) {
    throw std::invalid_argument(
        "make_initial_data: initial data vanished on the whole grid");
  }
  return field;
}

ScalarField linear_propagate(const ScalarField& u, double t) {
  u.grid.validate();
  auto spectrum = fft::forward(u.grid, u.values);
  const int N = u.grid.N;
  for (std::size_t idx = 0; idx < spectrum.size(); ++idx) {
    std::size_t rem = idx;
    double xi2 = 0.0;
    for (int d = 0; d < u.grid.n; ++d) {
      const double f = u.grid.frequency(static_cast<int>(rem % N));
      rem /= N;
      xi2 += f * f;
    }
    spectrum[idx] *= std::exp(cplx(0.0, t * std::sqrt(xi2)));
  }
  ScalarField out;
  out.grid = u.grid;
  out.values = fft::inverse(u.grid, spectrum);
  return out;
}

namespace {

struct StepWorkspace {
  GridSpec grid;
  double dt = 0.0;
  double p = 2.0;
  bool linear_only = false;
  std::vector<double> half_phase_re, half_phase_im;  // e^{i dt/2 |xi|}
  std::vector<double> mask;                           // 2/3-rule

  StepWorkspace(const SimConfig& config, double dt_in) {
    grid = config.grid;
    dt = dt_in;
    p = config.p;
    linear_only = config.linear_only;
    const int N = grid.N;
    std::vector<double> freq(N);
    for (int j = 0; j < N; ++j) freq[j] = grid.frequency(j);
    const int keep = N / 3;  // keep |k| <= N/3
    std::vector<double> axis_mask(N);
    for (int j = 0; j < N; ++j) {
      axis_mask[j] = std::abs(grid.wavenumber(j)) <= keep ? 1.0 : 0.0;
    }
    half_phase_re.resize(grid.size());
    half_phase_im.resize(grid.size());
    mask.assign(grid.size(), 1.0);
    const std::size_t total = grid.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rem = idx;
      double xi2 = 0.0;
      double m = 1.0;
      for (int d = grid.n - 1; d >= 0; --d) {
        const int j = static_cast<int>(rem % N);
        rem /= N;
        xi2 += freq[j] * freq[j];
        m *= axis_mask[j];
      }
      const double phase = 0.5 * dt * std::sqrt(xi2);
      half_phase_re[idx] = std::cos(phase);
      half_phase_im[idx] = std::sin(phase);
      mask[idx] = config.dealias ? m : 1.0;
    }
  }

  void apply_half_phase(std::vector<cplx>& spectrum, int times) const {
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
      cplx e(half_phase_re[i], half_phase_im[i]);
      if (times == 2) e *= e;
      if (times == -1) e = std::conj(e);
      spectrum[i] *= e;
    }
  }

  // N(u) = -i |u|^p, dealiased; returns the masked spectrum of N(u).
  std::vector<cplx> nonlinear_spectrum(const std::vector<cplx>& u) const {
    std::vector<cplx> nl(u.size());
    if (p == 2.0) {
      for (std::size_t i = 0; i < u.size(); ++i) {
        nl[i] = cplx(0.0, -std::norm(u[i]));
      }
    } else {
      const double half_p = 0.5 * p;
      for (std::size_t i = 0; i < u.size(); ++i) {
        nl[i] = cplx(0.0, -std::pow(std::norm(u[i]), half_p));
      }
    }
    auto spec = fft::forward(grid, nl);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= mask[i];
    return spec;
  }
};

void axpy(std::vector<cplx>& out, const std::vector<cplx>& base,
          const std::vector<cplx>& dir, double a) {
  out.resize(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + a * dir[i];
}

// One Lawson-RK4 step: exact half/full linear phases E, E^2 composed with
// classical RK4 on the rotated nonlinearity.
std::vector<cplx> lawson_rk4_step(const StepWorkspace& ws,
                                  const std::vector<cplx>& u) {
  const auto& grid = ws.grid;
  auto u_hat = fft::forward(grid, u);
  auto eu_hat = u_hat;
  ws.apply_half_phase(eu_hat, 1);
  auto e2u_hat = u_hat;
  ws.apply_half_phase(e2u_hat, 2);
  const auto u_half = fft::inverse(grid, eu_hat);
  const auto u_full = fft::inverse(grid, e2u_hat);
  if (ws.linear_only) return u_full;

  const double dt = ws.dt;

  auto n1_hat = ws.nonlinear_spectrum(u);        // k1 = N(u)
  auto en1_hat = n1_hat;
  ws.apply_half_phase(en1_hat, 1);
  const auto e_k1 = fft::inverse(grid, en1_hat);

  std::vector<cplx> stage;
  axpy(stage, u_half, e_k1, 0.5 * dt);
  auto n2_hat = ws.nonlinear_spectrum(stage);    // k2
  const auto k2 = fft::inverse(grid, n2_hat);

  axpy(stage, u_half, k2, 0.5 * dt);
  auto n3_hat = ws.nonlinear_spectrum(stage);    // k3
  auto en3_hat = n3_hat;
  ws.apply_half_phase(en3_hat, 1);
  const auto e_k3 = fft::inverse(grid, en3_hat);

  axpy(stage, u_full, e_k3, dt);
  auto n4_hat = ws.nonlinear_spectrum(stage);    // k4

  // u_next = E^2 u + dt/6 (E^2 k1 + 2 E k2 + 2 E k3 + k4)
  auto combo = n1_hat;
  ws.apply_half_phase(combo, 2);
  ws.apply_half_phase(n2_hat, 1);
  // en3_hat already carries one half phase
  for (std::size_t i = 0; i < combo.size(); ++i) {
    combo[i] += 2.0 * n2_hat[i] + 2.0 * en3_hat[i] + n4_hat[i];
  }
  const auto incr = fft::inverse(grid, combo);
  std::vector<cplx> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = u_full[i] + dt / 6.0 * incr[i];
  }
  return out;
}

struct SingleRun {
  SolutionTrace trace;
  bool blew_up = false;
  double t_num = 0.0;
};

SingleRun run_once(const SimConfig& config) {
  SingleRun run;
  run.trace.config = config;
  const StepWorkspace ws(config, config.dt);
  auto field = make_initial_data(config);
  auto record = [&](double t, const ScalarField& f, long step) {
    run.trace.times.push_back(t);
    run.trace.sup_norms.push_back(f.sup_norm());
    run.trace.l2_norms.push_back(f.l2_norm());
    if (config.snapshot_stride > 0 && step % config.snapshot_stride == 0) {
      run.trace.snapshot_times.push_back(t);
      run.trace.snapshots.push_back(f);
    }
  };
  record(0.0, field, 0);
  run.t_num = 0.0;

  const long total_steps =
      static_cast<long>(std::ceil(config.t_max / config.dt - 1e-12));
  double t = 0.0;
  for (long step = 1; step <= total_steps; ++step) {
    field.values = lawson_rk4_step(ws, field.values);
    t = step * config.dt;
    const double sup = field.sup_norm();
    const bool finite = std::isfinite(sup);
    if (finite) record(t, field, step);
    if (!finite || sup >= config.blowup_threshold) {
      run.blew_up = true;
      break;
    }
    run.t_num = t;
  }
  return run;
}

}  // namespace

std::pair<SolutionTrace, BlowupResult> integrate(const SimConfig& config) {
  config.validate();
  auto base = run_once(config);
  BlowupResult result;
  result.t_num = base.blew_up ? base.t_num : config.t_max;
  if (!base.blew_up) {
    result.status = BlowupStatus::survived_to_tmax;
    return {std::move(base.trace), result};
  }
  result.status = BlowupStatus::blew_up;
  if (config.confirm) {
    SimConfig refined = config;
    refined.dt = 0.5 * config.dt;
    refined.grid.N = 2 * config.grid.N;
    refined.snapshot_stride = 0;
    refined.confirm = false;
    auto check = run_once(refined);
    if (!check.blew_up) {
      result.status = BlowupStatus::unresolved;
      result.resolution_check = 1.0;
    } else {
      result.resolution_check =
          std::abs(base.t_num - check.t_num) / std::max(check.t_num, 1e-12);
      if (result.resolution_check > config.confirm_tol) {
        result.status = BlowupStatus::unresolved;
      }
    }
  }
  return {std::move(base.trace), result};
}

namespace {

// periodic trapezoid rule = h^n * sum
cplx grid_integral(const GridSpec& grid, const std::vector<cplx>& values) {
  cplx acc = 0.0;
  for (const auto& v : values) acc += v;
  return acc * std::pow(grid.h(), grid.n);
}

double snapshot_radius2(const GridSpec& grid, std::size_t idx,
                        std::array<double, 3>& coords) {
  std::size_t rem = idx;
  double r2 = 0.0;
  for (int d = grid.n - 1; d >= 0; --d) {
    const int j = static_cast<int>(rem % grid.N);
    rem /= grid.N;
    coords[d] = grid.coordinate(j);
    r2 += coords[d] * coords[d];
  }
  return r2;
}

}  // namespace

double weak_form_residual(const SolutionTrace& trace, double r, double T) {
  const auto& config = trace.config;
  const auto& grid = config.grid;
  if (trace.snapshots.empty()) {
    throw std::invalid_argument("weak_form_residual: trace has no snapshots");
  }
  if (!(r + 1.0 <= T)) {
    throw std::invalid_argument("weak_form_residual: need r + 1 <= T");
  }
  const auto params = testfn::TestFunctionParams::make(grid.n, r);

  // phi_r(t, .) sampled on the grid, plus its exact time derivative
  std::vector<double> radius2(grid.size());
  {
    std::array<double, 3> coords{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      radius2[i] = snapshot_radius2(grid, i, coords);
    }
  }
  auto phi_field = [&](double t) {
    ScalarField f = ScalarField::zero(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      f.values[i] = testfn::phi_r(params, t, radius2[i]);
    }
    return f;
  };

  const auto u0 = make_initial_data(config);
  const auto phi0 = phi_field(0.0);
  cplx lhs = cplx(0.0, 1.0) *
             grid_integral(grid, [&] {
               std::vector<cplx> prod(grid.size());
               for (std::size_t i = 0; i < grid.size(); ++i) {
                 prod[i] = u0.values[i] * phi0.values[i].real();
               }
               return prod;
             }());

  cplx nonlinear_term = 0.0;
  cplx rhs = 0.0;
  double prev_time = 0.0;
  cplx prev_nl = 0.0, prev_rhs = 0.0;
  bool have_prev = false;
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
    const double t = trace.snapshot_times[k];
    if (t > T + 1e-12) break;
    const auto& u = trace.snapshots[k];
    const auto phi = phi_field(t);
    const auto aphi = fraclap::spectral(phi, 1.0);
    cplx nl_now = 0.0, rhs_now = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double phi_v = phi.values[i].real();
      const double dphi = testfn::dphi_r_dt(params, t, radius2[i]);
      const cplx op(aphi.values[i].real(), -dphi);  // -i d_t phi + A phi
      rhs_now += u.values[i] * op;
      if (!config.linear_only) {
        nl_now += std::pow(std::abs(u.values[i]), config.p) * phi_v;
      }
    }
    const double hn = std::pow(grid.h(), grid.n);
    nl_now *= hn;
    rhs_now *= hn;
    if (have_prev) {
      const double w = 0.5 * (t - prev_time);
      nonlinear_term += w * (nl_now + prev_nl);
      rhs += w * (rhs_now + prev_rhs);
    }
    prev_time = t;
    prev_nl = nl_now;
    prev_rhs = rhs_now;
    have_prev = true;
  }
  return std::abs(lhs + nonlinear_term - rhs);
}

double wave_residual(const SolutionTrace& trace) {
  const auto& grid = trace.config.grid;
  const std::size_t m = trace.snapshots.size();
  if (m < 3) {
    throw std::invalid_argument("wave_residual: need at least three snapshots");
  }
  const double dt_snap = trace.snapshot_times[1] - trace.snapshot_times[0];
  // -|xi|^2 multiplier via the spectral engine with s = 2
  double acc = 0.0;
  long count = 0;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const auto& um = trace.snapshots[k - 1];
    const auto& u0 = trace.snapshots[k];
    const auto& up = trace.snapshots[k + 1];
    ScalarField im_u = ScalarField::zero(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      im_u.values[i] = u0.values[i].imag();
    }
    const auto lap = fraclap::spectral(im_u, 2.0);  // (-Lap) Im u
    const double p = trace.config.p;
    const bool with_nl = !trace.config.linear_only;
    double sum2 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double dtt_im =
          (um.values[i].imag() - 2.0 * u0.values[i].imag() +
           up.values[i].imag()) /
          (dt_snap * dt_snap);
      const double dt_nl =
          with_nl ? (std::pow(std::abs(up.values[i]), p) -
                     std::pow(std::abs(um.values[i]), p)) /
                        (2.0 * dt_snap)
                  : 0.0;
      const double res = dtt_im + lap.values[i].real() + dt_nl;
      sum2 += res * res;
    }
    acc += sum2 * std::pow(grid.h(), grid.n);
    ++count;
  }
  return std::sqrt(acc / count);
}

}  // namespace halfwave::solver
