#include "halfwave/lifespan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <stdexcept>

#include "halfwave/testfn.hpp"

namespace halfwave::lifespan {

const char* to_string(Law law) {
  switch (law) {
    case Law::critical_exp: return "critical_exp";
    case Law::subcritical_power: return "subcritical_power";
    case Law::advection_power: return "advection_power";
  }
  return "unknown";
}

void SweepConfig::validate() const {
  base.validate();
  for (std::size_t i = 1; i < epsilons.size(); ++i) {
    if (epsilons[i] > epsilons[i - 1]) {
      throw std::invalid_argument("SweepConfig: epsilons must be sorted descending");
    }
  }
  const int n = base.grid.n;
  const double critical_p = (n + 1.0) / n;
  if (law == Law::critical_exp && std::abs(base.p - critical_p) > 1e-12) {
    throw std::invalid_argument("SweepConfig: critical law requires p = (n+1)/n");
  }
  if (law == Law::subcritical_power &&
      !(base.p > 1.0 && base.p < critical_p)) {
    throw std::invalid_argument(
        "SweepConfig: subcritical law requires 1 < p < (n+1)/n");
  }
  if (parallel_width < 1) {
    throw std::invalid_argument("SweepConfig: parallel_width must be >= 1");
  }
}

std::vector<LifespanRecord> run_sweep(const SweepConfig& config) {
  config.validate();
  const std::size_t m = config.epsilons.size();
  std::vector<LifespanRecord> records(m);
  auto run_one = [&](std::size_t i) {
    solver::SimConfig sim = config.base;
    sim.epsilon = config.epsilons[i];
    sim.snapshot_stride = 0;  // sweeps keep norms only
    LifespanRecord rec;
    rec.epsilon = sim.epsilon;
    rec.dt = sim.dt;
    rec.N = sim.grid.N;
    rec.L = sim.grid.L;
    rec.threshold = sim.blowup_threshold;
    const auto [trace, result] = solver::integrate(sim);
    rec.t_num = result.t_num;
    rec.status = result.status;
    rec.drift = result.resolution_check;
    records[i] = rec;
  };
  // chunks of independent runs, aggregation ordered by index
  for (std::size_t start = 0; start < m;
       start += static_cast<std::size_t>(config.parallel_width)) {
    const std::size_t stop =
        std::min(m, start + static_cast<std::size_t>(config.parallel_width));
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, run_one, i));
    }
    for (auto& f : batch) f.get();
  }
  return records;
}

namespace {

struct Regression {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<double> residuals;
};

Regression linear_fit(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const std::size_t m = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  Regression reg;
  const double denom = m * sxx - sx * sx;
  reg.slope = (m * sxy - sx * sy) / denom;
  reg.intercept = (sy - reg.slope * sx) / m;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / m;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - (reg.intercept + reg.slope * x[i]);
    reg.residuals.push_back(r);
    ss_res += r * r;
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  reg.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return reg;
}

std::vector<const LifespanRecord*> resolved(
    const std::vector<LifespanRecord>& records) {
  std::vector<const LifespanRecord*> out;
  for (const auto& r : records) {
    if (r.status == solver::BlowupStatus::blew_up && r.t_num > 0.0) {
      out.push_back(&r);
    }
  }
  return out;
}

bool range_degenerate(const std::vector<const LifespanRecord*>& recs) {
  double lo = 1e300, hi = 0.0;
  for (const auto* r : recs) {
    lo = std::min(lo, r->epsilon);
    hi = std::max(hi, r->epsilon);
  }
  return !(hi / lo >= 10.0);
}

FitResult fit_against(const std::vector<LifespanRecord>& records,
                      const std::string& model,
                      const std::function<double(double)>& x_of_eps) {
  const auto recs = resolved(records);
  if (recs.size() < 4) {
    throw std::invalid_argument("fit: need at least 4 resolved records");
  }
  std::vector<double> xs, ys;
  for (const auto* r : recs) {
    xs.push_back(x_of_eps(r->epsilon));
    ys.push_back(std::log(r->t_num));
  }
  const auto reg = linear_fit(xs, ys);
  FitResult fit;
  fit.model = model;
  fit.c = reg.slope;
  fit.offset = reg.intercept;
  fit.r2 = reg.r2;
  fit.residuals = reg.residuals;
  fit.degenerate = range_degenerate(recs);
  // An upper envelope is always satisfiable once the intercept absorbs the
  // largest residual; record that it indeed covers every observation.
  const double max_res =
      *std::max_element(fit.residuals.begin(), fit.residuals.end());
  const double inflated = fit.offset + max_res;
  fit.envelope_holds = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] > inflated + fit.c * xs[i] + 1e-9) fit.envelope_holds = false;
  }
  return fit;
}

}  // namespace

FitResult fit_critical(const std::vector<LifespanRecord>& records, int n) {
  return fit_against(records, "critical_exp:logT=a+C*eps^(-1/n)",
                     [n](double eps) { return std::pow(eps, -1.0 / n); });
}

FitResult fit_subcritical(const std::vector<LifespanRecord>& records, int n,
                          double p) {
  const double critical_p = (n + 1.0) / n;
  if (!(p > 1.0 && p < critical_p)) {
    throw std::invalid_argument("fit_subcritical: need 1 < p < (n+1)/n");
  }
  return fit_against(records, "subcritical_power:logT=a+m*log(eps)",
                     [](double eps) { return std::log(eps); });
}

FitResult fit_power(const std::vector<LifespanRecord>& records) {
  return fit_against(records, "power:logT=a+m*log(eps)",
                     [](double eps) { return std::log(eps); });
}

double subcritical_exponent(int n, double p) {
  return 1.0 / (n - 1.0 / (p - 1.0));
}

std::vector<double> default_r_grid(double r_max, int points) {
  // geometric from 1e-2 up to r_max, prefixed with the exact 0
  std::vector<double> grid;
  grid.push_back(0.0);
  const double ratio = std::pow(r_max / 1e-2, 1.0 / (points - 2));
  double v = 1e-2;
  for (int i = 0; i < points - 1; ++i) {
    grid.push_back(v);
    v *= ratio;
  }
  grid.back() = r_max;
  return grid;
}

OdiTrace odi_diagnostic(const solver::SolutionTrace& trace, double epsilon,
                        const std::vector<double>& r_grid) {
  const auto& grid = trace.config.grid;
  if (trace.snapshots.size() < 3) {
    throw std::invalid_argument("odi_diagnostic: trace needs snapshots");
  }
  if (r_grid.size() < 4 || r_grid.front() != 0.0) {
    throw std::invalid_argument("odi_diagnostic: r grid must start at 0");
  }
  const int n = grid.n;
  const double power = (n + 1.0) / n;

  // |u|^{(n+1)/n} per snapshot, reused across r values
  const std::size_t nt = trace.snapshots.size();
  std::vector<std::vector<double>> u_pow(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    u_pow[k].resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      u_pow[k][i] = std::pow(std::abs(trace.snapshots[k].values[i]), power);
    }
  }
  std::vector<double> radius2(grid.size());
  {
    std::array<double, 3> coords{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::size_t rem = i;
      double r2 = 0.0;
      for (int d = grid.n - 1; d >= 0; --d) {
        const int j = static_cast<int>(rem % grid.N);
        rem /= grid.N;
        coords[d] = grid.coordinate(j);
        r2 += coords[d] * coords[d];
      }
      radius2[i] = r2;
    }
  }
  const double hn = std::pow(grid.h(), grid.n);

  OdiTrace odi;
  odi.r = r_grid;
  odi.y.resize(r_grid.size());
  // y(r): time-trapezoid of the spatial sums
  for (std::size_t jr = 0; jr < r_grid.size(); ++jr) {
    const auto params = testfn::TestFunctionParams::make(n, r_grid[jr]);
    double prev_t = 0.0, prev_s = 0.0;
    bool have_prev = false;
    double acc = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
      const double t = trace.snapshot_times[k];
      double s = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double psi = testfn::psi_r(params, t, radius2[i]);
        if (psi != 0.0) s += u_pow[k][i] * psi;
      }
      s *= hn;
      if (have_prev) acc += 0.5 * (t - prev_t) * (s + prev_s);
      prev_t = t;
      prev_s = s;
      have_prev = true;
    }
    odi.y[jr] = acc;
  }

  // Y by cumulative trapezoid of y/(r+1); Y' by centered differences
  odi.Y.assign(r_grid.size(), 0.0);
  for (std::size_t j = 1; j < r_grid.size(); ++j) {
    const double a = odi.y[j - 1] / (r_grid[j - 1] + 1.0);
    const double b = odi.y[j] / (r_grid[j] + 1.0);
    odi.Y[j] = odi.Y[j - 1] + 0.5 * (r_grid[j] - r_grid[j - 1]) * (a + b);
  }
  odi.Yp.assign(r_grid.size(), 0.0);
  for (std::size_t j = 1; j + 1 < r_grid.size(); ++j) {
    odi.Yp[j] = (odi.Y[j + 1] - odi.Y[j - 1]) / (r_grid[j + 1] - r_grid[j - 1]);
  }

  // Fubini cross-check: (t,x)-first evaluation of Y(R_max)
  {
    std::vector<testfn::TestFunctionParams> params_list;
    params_list.reserve(r_grid.size());
    for (double rv : r_grid) {
      params_list.push_back(testfn::TestFunctionParams::make(n, rv));
    }
    double prev_t = 0.0, prev_s = 0.0;
    bool have_prev = false;
    double acc = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
      const double t = trace.snapshot_times[k];
      double s = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        // K(t,x) = Int_0^{R} psi_r/(r+1) dr on the same r grid
        double kernel = 0.0;
        double prev_f =
            testfn::psi_r(params_list[0], t, radius2[i]) / (r_grid[0] + 1.0);
        for (std::size_t j = 1; j < r_grid.size(); ++j) {
          const double fj =
              testfn::psi_r(params_list[j], t, radius2[i]) / (r_grid[j] + 1.0);
          kernel += 0.5 * (r_grid[j] - r_grid[j - 1]) * (prev_f + fj);
          prev_f = fj;
        }
        if (kernel != 0.0) s += u_pow[k][i] * kernel;
      }
      s *= hn;
      if (have_prev) acc += 0.5 * (t - prev_t) * (s + prev_s);
      prev_t = t;
      prev_s = s;
      have_prev = true;
    }
    odi.fubini_gap = std::abs(acc - odi.Y.back());
  }

  // fitted ODI constant and Y' quality
  const double exponent = static_cast<double>(n) / (n + 1.0);
  double fitted = 0.0;
  for (std::size_t j = 1; j + 1 < r_grid.size(); ++j) {
    const double exact_yp = odi.y[j] / (r_grid[j] + 1.0);
    const double scale = std::max(std::abs(exact_yp), 1e-300);
    odi.max_yp_consistency = std::max(
        odi.max_yp_consistency, std::abs(odi.Yp[j] - exact_yp) / scale);
    if (odi.Yp[j] <= 0.0) {
      ++odi.excluded;
      continue;
    }
    const double rhs = std::pow((r_grid[j] + 1.0) * odi.Yp[j], exponent);
    fitted = std::max(fitted, (epsilon + odi.Y[j]) / rhs);
  }
  odi.fitted_c = fitted;

  // integrated lower bound with the fitted constant:
  //   Y(R) >= (eps^{-1/n} - Ct log(R+1))^{-n} - eps,
  //   Ct = fitted^{-(n+1)/n} / n
  if (fitted > 0.0 && epsilon > 0.0) {
    const double ct = std::pow(fitted, -(n + 1.0) / n) / n;
    odi.closing_holds = true;
    double worst = 1e300;
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
      const double parens =
          std::pow(epsilon, -1.0 / n) - ct * std::log(r_grid[j] + 1.0);
      if (parens <= 0.0) continue;
      const double bound = std::pow(parens, -static_cast<double>(n)) - epsilon;
      const double margin = odi.Y[j] - bound;
      worst = std::min(worst, margin);
      // 5% slack on the bound magnitude absorbs r-grid discretization
      if (margin < -0.05 * std::max(std::abs(bound), epsilon)) {
        odi.closing_holds = false;
      }
    }
    odi.closing_margin = worst;
  }
  return odi;
}

void export_records_csv(const std::vector<LifespanRecord>& records, double p,
                        int n, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_records_csv: cannot open " + path);
  out << "epsilon,p,n,T_num,status,dt,N,L,M,drift\n";
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%d,%.17g,%s,%.17g,%d,%.17g,%.17g,%.17g\n",
                  r.epsilon, p, n, r.t_num, solver::to_string(r.status), r.dt,
                  r.N, r.L, r.threshold, r.drift);
    out << buf;
  }
  if (!out) throw std::runtime_error("export_records_csv: write failed: " + path);
}

}  // namespace halfwave::lifespan
