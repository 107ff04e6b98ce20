#pragma once

#include "lyapdisc/estimator.hpp"
#include "lyapdisc/mc_oracle.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace lyapdisc::cli {

// Nine significant digits, the precision of every emitted float.
std::string format_real(double x);
// x rounded to nine significant digits.
double round_real(double x);

// Headline fields first (alpha, kappa, N, delta_alpha, v_alpha_avg,
// l1_estimate, error_bound), then the extra diagnostics.
nlohmann::ordered_json report_json(const EstimateReport& r);
std::string report_csv_header();
std::string report_csv_row(const EstimateReport& r);

nlohmann::ordered_json mc_json(const McEstimate& m);
std::string mc_csv_header();
std::string mc_csv_row(const McEstimate& m);

nlohmann::ordered_json error_json(const std::string& name, const std::string& message);

}  // namespace lyapdisc::cli
