#include "halfwave/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace halfwave::report {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json verdict_to_json(const EstimateVerdict& verdict) {
  return nlohmann::json{
      {"estimate_id", verdict.estimate_id},
      {"fitted_constant", verdict.fitted_constant},
      {"samples", verdict.sample_count},
      {"worst_point",
       {verdict.max_ratio_location[0], verdict.max_ratio_location[1],
        verdict.max_ratio_location[2]}},
      {"pass", verdict.pass},
      {"refinement_drift", verdict.refinement_drift},
      {"unresolved", verdict.unresolved_count},
  };
}

nlohmann::json fit_to_json(const lifespan::FitResult& fit) {
  return nlohmann::json{
      {"model", fit.model},
      {"c", fit.c},
      {"offset", fit.offset},
      {"r2", fit.r2},
      {"residuals", fit.residuals},
      {"degenerate", fit.degenerate},
      {"envelope_holds", fit.envelope_holds},
  };
}

nlohmann::json odi_to_json(const lifespan::OdiTrace& odi) {
  return nlohmann::json{
      {"r", odi.r},
      {"y", odi.y},
      {"Y", odi.Y},
      {"Yp", odi.Yp},
      {"fitted_c", odi.fitted_c},
      {"excluded", odi.excluded},
      {"fubini_gap", odi.fubini_gap},
      {"closing_margin", odi.closing_margin},
      {"closing_holds", odi.closing_holds},
      {"yp_consistency", odi.max_yp_consistency},
  };
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("report: cannot open " + path);
  out << content;
  if (!out) throw std::runtime_error("report: write failed: " + path);
}

void write_json(const std::string& path, const nlohmann::json& payload) {
  write_text(path, payload.dump(2) + "\n");
}

void write_xy(const std::string& path, const std::vector<double>& x,
              const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("write_xy: column size mismatch");
  }
  std::string content;
  for (std::size_t i = 0; i < x.size(); ++i) {
    content += format_double(x[i]) + " " + format_double(y[i]) + "\n";
  }
  write_text(path, content);
}

}  // namespace halfwave::report
