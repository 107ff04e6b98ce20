#include "report.hpp"

#include <cstdio>
#include <sstream>
#include <string_view>

namespace lyapdisc::cli {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

double round_real(double x) { return std::stod(format_real(x)); }

nlohmann::ordered_json mc_json(const McEstimate& m) {
  nlohmann::ordered_json j;
  j["mean"] = round_real(m.mean);
  j["stderr"] = round_real(m.std_error);
  j["steps"] = m.steps_per_sample;
  j["samples"] = m.samples;
  j["seed"] = m.seed;
  j["burn_in"] = m.burn_in;
  j["start_theta"] = round_real(m.start_theta);
  j["generator"] = std::string(kMcGenerator);
  return j;
}

nlohmann::ordered_json report_json(const EstimateReport& r) {
  nlohmann::ordered_json j;
  j["alpha"] = round_real(r.alpha);
  j["kappa"] = round_real(r.kappa);
  j["N"] = r.mesh_size;
  j["delta_alpha"] = round_real(r.delta_alpha);
  j["v_alpha_avg"] = round_real(r.v_alpha_avg);
  j["l1_estimate"] = round_real(r.l1_estimate);
  j["error_bound"] = round_real(r.error_bound);
  j["n"] = r.n;
  j["kappa_upper"] = round_real(r.kappa_upper);
  j["l1_per_step"] = round_real(r.l1_per_step);
  j["stationary_residual"] = round_real(r.stationary_residual);
  j["word_count"] = r.word_count;
  if (r.mc_crosscheck) j["mc_crosscheck"] = mc_json(*r.mc_crosscheck);
  return j;
}

std::string report_csv_header() {
  return "alpha,kappa,N,delta_alpha,v_alpha_avg,l1_estimate,error_bound,n,kappa_upper,l1_per_step,"
         "stationary_residual,word_count,mc_mean,mc_stderr";
}

std::string report_csv_row(const EstimateReport& r) {
  std::ostringstream os;
  os << format_real(r.alpha) << ',' << format_real(r.kappa) << ',' << r.mesh_size << ','
     << format_real(r.delta_alpha) << ',' << format_real(r.v_alpha_avg) << ',' << format_real(r.l1_estimate) << ','
     << format_real(r.error_bound) << ',' << r.n << ',' << format_real(r.kappa_upper) << ','
     << format_real(r.l1_per_step) << ',' << format_real(r.stationary_residual) << ',' << r.word_count << ',';
  if (r.mc_crosscheck) os << format_real(r.mc_crosscheck->mean) << ',' << format_real(r.mc_crosscheck->std_error);
  else os << ',';
  return os.str();
}

std::string mc_csv_header() { return "mean,stderr,steps,samples,seed,burn_in,start_theta,generator"; }

std::string mc_csv_row(const McEstimate& m) {
  std::ostringstream os;
  os << format_real(m.mean) << ',' << format_real(m.std_error) << ',' << m.steps_per_sample << ',' << m.samples
     << ',' << m.seed << ',' << m.burn_in << ',' << format_real(m.start_theta) << ',' << kMcGenerator;
  return os.str();
}

nlohmann::ordered_json error_json(const std::string& name, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = name;
  j["message"] = message;
  return j;
}

}  // namespace lyapdisc::cli
