#ifndef HALFWAVE_REPORT_HPP
#define HALFWAVE_REPORT_HPP

// Report writers shared by the CLI and the tests.  All numeric output goes
// through format_double so that identical inputs yield byte-identical files.

#include <string>
#include <vector>

#include <json.hpp>

#include "halfwave/lifespan.hpp"
#include "halfwave/verdict.hpp"

namespace halfwave::report {

/// Shortest round-trip decimal representation (%.17g).
std::string format_double(double v);

nlohmann::json verdict_to_json(const EstimateVerdict& verdict);
nlohmann::json fit_to_json(const lifespan::FitResult& fit);
nlohmann::json odi_to_json(const lifespan::OdiTrace& odi);

void write_text(const std::string& path, const std::string& content);
void write_json(const std::string& path, const nlohmann::json& payload);

/// Two-column whitespace-separated plot data.
void write_xy(const std::string& path, const std::vector<double>& x,
              const std::vector<double>& y);

}  // namespace halfwave::report

#endif
