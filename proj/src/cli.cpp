#include "halfwave/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "halfwave/advection.hpp"
#include "halfwave/config.hpp"
#include "halfwave/fraclap.hpp"
#include "halfwave/lifespan.hpp"
#include "halfwave/report.hpp"
#include "halfwave/solver.hpp"
#include "halfwave/specfun.hpp"
#include "halfwave/testfn.hpp"

namespace halfwave::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Context {
  std::string config_path;
  std::string output_dir = ".";
  std::vector<std::string> overrides;
  bool quiet = false;
  Config config;

  void load_config(bool required) {
    if (!config_path.empty()) {
      if (!fs::exists(config_path)) {
        throw std::runtime_error("config file not found: " + config_path);
      }
      config = Config::from_file(config_path);
    } else if (required) {
      throw std::runtime_error("this subcommand requires --config PATH");
    }
    for (const auto& o : overrides) config.apply_override(o);
    fs::create_directories(output_dir);
  }

  std::string out_path(const std::string& name) const {
    return (fs::path(output_dir) / name).string();
  }

  void say(const std::string& line) const {
    if (!quiet) std::cout << line << "\n";
  }
};

solver::SimConfig sim_config_from(const Config& c) {
  solver::SimConfig sim;
  sim.grid.n = c.get_int("sim.n", 1);
  sim.grid.L = c.get_double("sim.L", 40.0);
  sim.grid.N = c.get_int("sim.N", 1024);
  sim.p = c.get_double("sim.p", 2.0);
  sim.epsilon = c.get_double("sim.epsilon", 0.1);
  sim.profile = c.get_string("sim.profile", "gaussian");
  sim.dt = c.get_double("sim.dt", 1e-3);
  sim.t_max = c.get_double("sim.t_max", 10.0);
  sim.blowup_threshold = c.get_double("sim.threshold", 1e6);
  sim.snapshot_stride = c.get_int("sim.snapshot_stride", 0);
  sim.linear_only = c.get_bool("sim.linear_only", false);
  sim.dealias = c.get_bool("sim.dealias", true);
  sim.confirm = c.get_bool("sim.confirm", true);
  sim.confirm_tol = c.get_double("sim.confirm_tol", 0.05);
  return sim;
}

// ---------------------------------------------------------------- verbs --

int run_verify_identities(Context& ctx, int n_max) {
  ctx.load_config(false);
  bool ok = true;
  json rows = json::array();
  auto check = [&](const std::string& id, double got, double want,
                   double tol) {
    const double err = std::abs(got - want);
    const bool pass = err <= tol;
    ok = ok && pass;
    rows.push_back({{"id", id},
                    {"value", got},
                    {"reference", want},
                    {"error", err},
                    {"tolerance", tol},
                    {"pass", pass}});
    ctx.say(std::string(pass ? "pass  " : "FAIL  ") + id +
            "  err=" + report::format_double(err));
  };

  check("gamma(0.5)=sqrt(pi)", specfun::gamma(0.5),
        std::sqrt(std::numbers::pi), 1e-13);
  check("gamma(1)=1", specfun::gamma(1.0), 1.0, 1e-13);
  check("gamma(5)=24", specfun::gamma(5.0), 24.0, 24.0 * 1e-13);
  check("c0(1)=pi/4", specfun::c0(1), std::numbers::pi / 4.0, 1e-12);
  check("c0(2)=8/(3pi)", specfun::c0(2), 8.0 / (3.0 * std::numbers::pi),
        1e-12);
  for (int n = 1; n <= n_max; ++n) {
    check("c0 dual form n=" + std::to_string(n), specfun::c0(n),
          specfun::c0_double_factorial_form(n), 1e-12);
    // (-Lap)^{1/2} eta0(0) = 0 in gamma form
    const double lhs =
        specfun::frac_power_at_origin({n, 0.5, n + 1.0}) -
        specfun::c0(n) * specfun::frac_power_at_origin({n, 0.5, n + 2.0});
    check("eta0 anchor n=" + std::to_string(n), lhs, 0.0, 1e-12);
  }
  // quadrature engine against the gamma identity on a small spot grid
  for (const auto& [n, q] : std::vector<std::pair<int, double>>{
           {1, 2.0}, {1, 3.0}, {2, 3.0}}) {
    const auto profile = fraclap::RadialProfile::single(q);
    const auto res = fraclap::quadrature_radial(
        n, [&](double rr) { return profile(rr); }, 0.0, 0.5, {});
    const double exact = specfun::frac_power_at_origin({n, 0.5, q});
    check("quadrature(n=" + std::to_string(n) + ",q=" +
              report::format_double(q) + ")",
          res.value, exact, 1e-6 * exact);
  }
  report::write_json(ctx.out_path("identities.json"),
                     json{{"checks", rows}, {"pass", ok}});
  return ok ? 0 : 1;
}

int run_fraclap(Context& ctx) {
  ctx.load_config(true);
  const auto& c = ctx.config;
  GridSpec grid;
  grid.n = c.get_int("fraclap.n", 1);
  grid.L = c.get_double("fraclap.L", 100.0);
  grid.N = c.get_int("fraclap.N", 4096);
  const double sigma = c.get_double("fraclap.sigma", 0.5);
  const double q = c.get_double("fraclap.q", grid.n + 1.0);
  const double t = c.get_double("fraclap.t", 0.0);
  auto radii = c.get_double_list("fraclap.radii");
  if (radii.empty()) radii = {0.0, 1.0, 2.0};
  const double tol = c.get_double("fraclap.tolerance", 5e-3);

  const auto profile = fraclap::RadialProfile::single(q, t);
  const auto report_cv =
      fraclap::cross_validate(profile, radii, sigma, grid, tol);
  json rows = json::array();
  for (const auto& row : report_cv.rows) {
    json j{{"radius", row.radius},
           {"spectral", row.spectral},
           {"quadrature", row.quadrature},
           {"quadrature_error", row.quadrature_error},
           {"diff", row.diff},
           {"flagged", row.flagged}};
    if (row.exact) j["exact"] = *row.exact;
    rows.push_back(j);
    ctx.say("r=" + report::format_double(row.radius) +
            "  spectral=" + report::format_double(row.spectral) +
            "  quadrature=" + report::format_double(row.quadrature) +
            "  diff=" + report::format_double(row.diff) +
            (row.flagged ? "  FLAGGED" : ""));
  }
  report::write_json(ctx.out_path("fraclap_report.json"),
                     json{{"n", grid.n},
                          {"sigma", sigma},
                          {"q", q},
                          {"t", t},
                          {"tolerance", tol},
                          {"flagged", report_cv.flagged_count},
                          {"rows", rows}});
  return 0;
}

int run_check_estimates(Context& ctx) {
  ctx.load_config(true);
  const auto& c = ctx.config;
  const int n = c.get_int("estimates.n", 1);
  testfn::VerifierOptions opts;
  opts.samples = c.get_int("estimates.samples", 12);
  opts.angles = c.get_int("estimates.angles", 4);
  std::istringstream which(c.get_string("estimates.which",
                                        "lemma14,lemma23,prop21,eq14"));
  bool ok = true;
  json out = json::array();
  std::string item;
  while (std::getline(which, item, ',')) {
    std::vector<EstimateVerdict> verdicts;
    if (item == "lemma14") {
      for (double q : c.has("estimates.q_list")
                          ? c.get_double_list("estimates.q_list")
                          : std::vector<double>{0.5, 1.0, 2.0}) {
        verdicts.push_back(testfn::verify_lemma14(n, q, opts));
      }
    } else if (item == "lemma23") {
      for (double q : c.has("estimates.q_list")
                          ? c.get_double_list("estimates.q_list")
                          : std::vector<double>{1.0, 2.0}) {
        verdicts.push_back(testfn::verify_lemma23(n, q, opts));
      }
    } else if (item == "prop21") {
      verdicts.push_back(testfn::verify_prop21(n, opts));
    } else if (item == "eq14") {
      for (double r : c.has("estimates.r_list")
                          ? c.get_double_list("estimates.r_list")
                          : std::vector<double>{1.0, 10.0, 100.0}) {
        verdicts.push_back(testfn::verify_eq14(n, r, opts));
      }
    } else {
      throw std::runtime_error("check-estimates: unknown estimate '" + item +
                               "'");
    }
    for (const auto& v : verdicts) {
      ok = ok && v.pass;
      out.push_back(report::verdict_to_json(v));
      ctx.say(std::string(v.pass ? "pass  " : "FAIL  ") + v.estimate_id +
              "  C=" + report::format_double(v.fitted_constant) +
              "  drift=" + report::format_double(v.refinement_drift));
    }
  }
  report::write_json(ctx.out_path("estimates.json"),
                     json{{"verdicts", out}, {"pass", ok}});
  return ok ? 0 : 1;
}

void write_trace(const Context& ctx, const solver::SolutionTrace& trace,
                 bool save_snapshots) {
  std::string text = "# time sup_norm l2_norm\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    text += report::format_double(trace.times[i]) + " " +
            report::format_double(trace.sup_norms[i]) + " " +
            report::format_double(trace.l2_norms[i]) + "\n";
  }
  report::write_text(ctx.out_path("trace.txt"), text);
  if (save_snapshots) {
    for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof(name), "snapshot_%05zu.bin", k);
      write_field(trace.snapshots[k], ctx.out_path(name));
    }
  }
}

int run_simulate(Context& ctx) {
  ctx.load_config(true);
  auto sim = sim_config_from(ctx.config);
  const auto [trace, result] = solver::integrate(sim);
  write_trace(ctx, trace, ctx.config.get_bool("sim.save_snapshots", false));
  report::write_json(
      ctx.out_path("result.json"),
      json{{"status", solver::to_string(result.status)},
           {"T_num", result.t_num},
           {"resolution_check", result.resolution_check},
           {"epsilon", sim.epsilon},
           {"p", sim.p},
           {"n", sim.grid.n},
           {"N", sim.grid.N},
           {"L", sim.grid.L},
           {"dt", sim.dt}});
  ctx.say(std::string("status=") + solver::to_string(result.status) +
          "  T_num=" + report::format_double(result.t_num));
  return 0;
}

int run_advection_oracle(Context& ctx) {
  ctx.load_config(true);
  const auto& c = ctx.config;
  const double p = c.get_double("advection.p", 2.0);
  const std::string profile = c.get_string("advection.profile", "sech2");
  GridSpec grid;
  grid.n = 1;
  grid.L = c.get_double("advection.L", 100.0);
  grid.N = c.get_int("advection.N", 2048);
  advection::AdvectionRunOptions run;
  run.dt = c.get_double("advection.dt", 5e-4);
  run.t_max = c.get_double("advection.t_max", 100.0);

  bool ok = true;
  json out;
  auto epsilons = c.get_double_list("advection.epsilons");
  if (epsilons.empty()) epsilons = {c.get_double("advection.epsilon", 0.5)};
  json rows = json::array();
  for (double eps : epsilons) {
    const auto problem = advection::AdvectionProblem::make(p, profile, eps);
    const double t_star = advection::exact_lifespan(problem);
    advection::AdvectionRunOptions this_run = run;
    this_run.t_max = std::min(run.t_max, 2.0 * t_star);
    const auto numeric = advection::integrate_advection(problem, grid, this_run);
    const double gap = std::abs(numeric.t_num - t_star) / t_star;
    const bool pass =
        numeric.status == solver::BlowupStatus::blew_up && gap <= 0.02;
    ok = ok && pass;
    rows.push_back({{"epsilon", eps},
                    {"T_exact", t_star},
                    {"T_num", numeric.t_num},
                    {"relative_gap", gap},
                    {"status", solver::to_string(numeric.status)},
                    {"pass", pass}});
    ctx.say(std::string(pass ? "pass  " : "FAIL  ") + "eps=" +
            report::format_double(eps) + "  T*=" +
            report::format_double(t_star) + "  T_num=" +
            report::format_double(numeric.t_num) + "  gap=" +
            report::format_double(gap));
  }
  out["lifespans"] = rows;
  if (epsilons.size() >= 5) {
    const auto scaling =
        advection::eq8_scaling_check(p, profile, epsilons, grid, run);
    const bool slope_ok =
        std::abs(scaling.numeric_slope - scaling.expected_slope) <= 0.05;
    ok = ok && slope_ok;
    out["scaling"] = {{"expected_slope", scaling.expected_slope},
                      {"analytic_slope", scaling.analytic_slope},
                      {"numeric_slope", scaling.numeric_slope},
                      {"pass", slope_ok}};
    ctx.say(std::string(slope_ok ? "pass  " : "FAIL  ") + "scaling slope=" +
            report::format_double(scaling.numeric_slope) + " expected=" +
            report::format_double(scaling.expected_slope));
  }
  out["pass"] = ok;
  report::write_json(ctx.out_path("advection.json"), out);
  return ok ? 0 : 1;
}

int run_sweep_verb(Context& ctx) {
  ctx.load_config(true);
  const auto& c = ctx.config;
  lifespan::SweepConfig sweep;
  sweep.base = sim_config_from(c);
  sweep.epsilons = c.get_double_list("sweep.epsilons");
  if (sweep.epsilons.empty()) {
    throw std::runtime_error("sweep: sweep.epsilons must be a nonempty list");
  }
  const std::string law = c.get_string("sweep.law", "critical_exp");
  if (law == "critical_exp") sweep.law = lifespan::Law::critical_exp;
  else if (law == "subcritical_power") sweep.law = lifespan::Law::subcritical_power;
  else if (law == "advection_power") sweep.law = lifespan::Law::advection_power;
  else throw std::runtime_error("sweep: unknown law '" + law + "'");
  sweep.parallel_width = c.get_int("sweep.parallel_width", 2);

  const auto records = lifespan::run_sweep(sweep);
  lifespan::export_records_csv(records, sweep.base.p, sweep.base.grid.n,
                               ctx.out_path("records.csv"));
  for (const auto& r : records) {
    ctx.say("eps=" + report::format_double(r.epsilon) + "  T_num=" +
            report::format_double(r.t_num) + "  status=" +
            solver::to_string(r.status) + "  drift=" +
            report::format_double(r.drift));
  }
  const int n = sweep.base.grid.n;
  json fits;
  std::vector<double> log_t, x_crit, x_pow;
  for (const auto& r : records) {
    if (r.status != solver::BlowupStatus::blew_up) continue;
    log_t.push_back(std::log(r.t_num));
    x_crit.push_back(std::pow(r.epsilon, -1.0 / n));
    x_pow.push_back(std::log(r.epsilon));
  }
  if (sweep.law == lifespan::Law::critical_exp) {
    const auto crit = lifespan::fit_critical(records, n);
    const auto pow_fit = lifespan::fit_power(records);
    fits["critical"] = report::fit_to_json(crit);
    fits["power"] = report::fit_to_json(pow_fit);
    report::write_xy(ctx.out_path("fit_critical.dat"), x_crit, log_t);
    report::write_xy(ctx.out_path("fit_power.dat"), x_pow, log_t);
    ctx.say("critical fit: C=" + report::format_double(crit.c) +
            " R2=" + report::format_double(crit.r2));
    ctx.say("power fit:    m=" + report::format_double(pow_fit.c) +
            " R2=" + report::format_double(pow_fit.r2));
  } else if (sweep.law == lifespan::Law::subcritical_power) {
    const auto fit = lifespan::fit_subcritical(records, n, sweep.base.p);
    fits["subcritical"] = report::fit_to_json(fit);
    fits["subcritical"]["theoretical_exponent"] =
        lifespan::subcritical_exponent(n, sweep.base.p);
    report::write_xy(ctx.out_path("fit_subcritical.dat"), x_pow, log_t);
  } else {
    const auto fit = lifespan::fit_power(records);
    fits["power"] = report::fit_to_json(fit);
    report::write_xy(ctx.out_path("fit_power.dat"), x_pow, log_t);
  }
  report::write_json(ctx.out_path("fits.json"), fits);
  return 0;
}

int run_fit(Context& ctx) {
  ctx.load_config(true);
  const auto& c = ctx.config;
  const std::string records_path = c.get_string("fit.records", "");
  if (records_path.empty() || !fs::exists(records_path)) {
    throw std::runtime_error("fit: fit.records does not name an existing CSV: " +
                             records_path);
  }
  std::ifstream in(records_path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<lifespan::LifespanRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) {
      throw std::runtime_error("fit: malformed CSV row: " + line);
    }
    lifespan::LifespanRecord r;
    r.epsilon = std::stod(cells[0]);
    r.t_num = std::stod(cells[3]);
    r.status = cells[4] == "blew_up" ? solver::BlowupStatus::blew_up
               : cells[4] == "survived_to_Tmax"
                   ? solver::BlowupStatus::survived_to_tmax
                   : solver::BlowupStatus::unresolved;
    r.dt = std::stod(cells[5]);
    r.N = std::stoi(cells[6]);
    r.L = std::stod(cells[7]);
    r.threshold = std::stod(cells[8]);
    r.drift = std::stod(cells[9]);
    records.push_back(r);
  }
  const int n = c.get_int("fit.n", 1);
  const std::string law = c.get_string("fit.law", "critical_exp");
  json out;
  lifespan::FitResult fit;
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    if (r.status != solver::BlowupStatus::blew_up) continue;
    ys.push_back(std::log(r.t_num));
  }
  if (law == "critical_exp") {
    fit = lifespan::fit_critical(records, n);
    for (const auto& r : records) {
      if (r.status == solver::BlowupStatus::blew_up) {
        xs.push_back(std::pow(r.epsilon, -1.0 / n));
      }
    }
  } else if (law == "subcritical_power") {
    fit = lifespan::fit_subcritical(records, n, c.get_double("fit.p", 1.5));
    for (const auto& r : records) {
      if (r.status == solver::BlowupStatus::blew_up) {
        xs.push_back(std::log(r.epsilon));
      }
    }
  } else if (law == "advection_power") {
    fit = lifespan::fit_power(records);
    for (const auto& r : records) {
      if (r.status == solver::BlowupStatus::blew_up) {
        xs.push_back(std::log(r.epsilon));
      }
    }
  } else {
    throw std::runtime_error("fit: unknown law '" + law + "'");
  }
  out = report::fit_to_json(fit);
  report::write_json(ctx.out_path("fit.json"), out);
  report::write_xy(ctx.out_path("fit.dat"), xs, ys);
  ctx.say("fit " + fit.model + ": c=" + report::format_double(fit.c) +
          " offset=" + report::format_double(fit.offset) +
          " R2=" + report::format_double(fit.r2));
  return fit.degenerate ? 1 : 0;
}

int run_odi(Context& ctx) {
  ctx.load_config(true);
  auto sim = sim_config_from(ctx.config);
  if (sim.snapshot_stride <= 0) sim.snapshot_stride = 10;
  const auto [trace, result] = solver::integrate(sim);
  if (trace.snapshots.size() < 4) {
    throw std::runtime_error("odi: trace produced too few snapshots");
  }
  const double horizon = trace.snapshot_times.back();
  const double r_max = ctx.config.get_double(
      "odi.r_max", std::max(0.5, 0.8 * (horizon - 1.0)));
  const int r_points = ctx.config.get_int("odi.r_points", 32);
  const auto odi = lifespan::odi_diagnostic(
      trace, sim.epsilon, lifespan::default_r_grid(r_max, r_points));

  bool ok = odi.closing_holds || sim.epsilon == 0.0;
  for (double v : odi.y) ok = ok && v >= 0.0;
  ok = ok && odi.Y.front() == 0.0;
  for (std::size_t j = 1; j < odi.Y.size(); ++j) {
    ok = ok && odi.Y[j] + 1e-15 >= odi.Y[j - 1];
  }
  json out = report::odi_to_json(odi);
  out["epsilon"] = sim.epsilon;
  out["horizon"] = horizon;
  out["status"] = solver::to_string(result.status);
  out["pass"] = ok;
  report::write_json(ctx.out_path("odi.json"), out);
  ctx.say("odi: fitted C=" + report::format_double(odi.fitted_c) +
          " fubini_gap=" + report::format_double(odi.fubini_gap) +
          " closing_holds=" + (odi.closing_holds ? "true" : "false"));
  return ok ? 0 : 1;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"halfwave: fractional-Laplacian engines, pointwise-estimate "
               "verifiers, blowup simulations, and lifespan fits"};
  app.require_subcommand(1);

  Context ctx;
  int n_max = 10;
  struct Verb {
    CLI::App* cmd;
    std::function<int(Context&)> run;
  };
  std::vector<Verb> verbs;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", ctx.config_path, "key=value config file");
    cmd->add_option("--output-dir", ctx.output_dir,
                    "directory for all written files");
    cmd->add_option("--set", ctx.overrides,
                    "override a config key (key=value, repeatable)");
    cmd->add_flag("--quiet", ctx.quiet, "suppress progress output");
  };

  auto* vi = app.add_subcommand("verify-identities",
                                "exact identity and oracle spot checks");
  vi->add_option("--n-max", n_max, "largest dimension for the dual-form check");
  add_common(vi);
  verbs.push_back({vi, [&](Context& c) { return run_verify_identities(c, n_max); }});

  auto* fl = app.add_subcommand("fraclap",
                                "cross-validate the two fractional-Laplacian engines");
  add_common(fl);
  verbs.push_back({fl, run_fraclap});

  auto* ce = app.add_subcommand("check-estimates",
                                "fit constants for the pointwise estimates");
  add_common(ce);
  verbs.push_back({ce, run_check_estimates});

  auto* si = app.add_subcommand("simulate", "integrate the Cauchy problem");
  add_common(si);
  verbs.push_back({si, run_simulate});

  auto* ao = app.add_subcommand("advection-oracle",
                                "exact 1D lifespan oracle and scaling check");
  add_common(ao);
  verbs.push_back({ao, run_advection_oracle});

  auto* sw = app.add_subcommand("sweep", "epsilon sweep with lifespan fits");
  add_common(sw);
  verbs.push_back({sw, run_sweep_verb});

  auto* ft = app.add_subcommand("fit", "fit lifespan laws to a records CSV");
  add_common(ft);
  verbs.push_back({ft, run_fit});

  auto* od = app.add_subcommand("odi",
                                "scaling-parameter inequality diagnostic");
  add_common(od);
  verbs.push_back({od, run_odi});

  std::vector<const char*> argv;
  argv.push_back("halfwave");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help() << std::flush;
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }
  try {
    for (const auto& verb : verbs) {
      if (verb.cmd->parsed()) return verb.run(ctx);
    }
    std::cerr << "usage error: no subcommand given\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace halfwave::cli
