#include "commands.hpp"

#include "lyapdisc/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags {
  lyapdisc::cli::CommandOptions opts;
  unsigned threads = 0;
  bool json = false;
  bool csv = false;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Flags& flags) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", flags.opts.config_path, "YAML run configuration")->required();
  sub->add_option("--out", flags.opts.out_path, "output file");
  sub->add_option("--threads", flags.threads, "worker threads (0: all cores)");
  auto* json = sub->add_flag("--json", flags.json, "JSON output (default)");
  auto* csv = sub->add_flag("--csv", flags.csv, "CSV output");
  json->excludes(csv);
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov exponents of SL(2, R) Bernoulli cocycles by transfer operator discretization"};
  app.require_subcommand(1);
  Flags flags;
  auto* estimate = add_command(app, "estimate", "full estimate with error bound", flags);
  auto* scan = add_command(app, "kappa-scan", "contraction constant over the alpha grid and n range", flags);
  auto* dump = add_command(app, "measure-dump", "stationary vector of the discretization", flags);
  auto* mc = add_command(app, "mc", "Monte Carlo estimate of the top exponent", flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lyapdisc::cli::kExitConfig;
  }

  lyapdisc::set_num_threads(flags.threads);
  flags.opts.format = flags.csv ? lyapdisc::cli::Format::Csv : lyapdisc::cli::Format::Json;
  using namespace lyapdisc::cli;
  if (*estimate) return cmd_estimate(flags.opts, std::cout, std::cerr);
  if (*scan) return cmd_kappa_scan(flags.opts, std::cout, std::cerr);
  if (*dump) return cmd_measure_dump(flags.opts, std::cout, std::cerr);
  if (*mc) return cmd_mc(flags.opts, std::cout, std::cerr);
  return kExitFailure;
}
