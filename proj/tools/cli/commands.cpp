#include "commands.hpp"

#include "config.hpp"
#include "report.hpp"

#include "lyapdisc/contraction.hpp"
#include "lyapdisc/error.hpp"
#include "lyapdisc/estimator.hpp"
#include "lyapdisc/mc_oracle.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

namespace lyapdisc::cli {

namespace {

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError: return kExitConfig;
    case ErrorCode::NoContraction: return kExitNoContraction;
    case ErrorCode::NotMixing: return kExitNotMixing;
    case ErrorCode::CapExceeded: return kExitCapExceeded;
    default: return kExitFailure;
  }
}

int guarded(std::ostream& out, std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const Error& e) {
    const std::string name(error_name(e.code()));
    out << error_json(name, e.what()).dump() << '\n';
    err << "lyapdisc: " << name << ": " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    out << error_json("Failure", e.what()).dump() << '\n';
    err << "lyapdisc: " << e.what() << '\n';
    return kExitFailure;
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

// Writes to --out when given, to `out` otherwise.
void emit(const CommandOptions& opts, std::ostream& out, const std::string& text) {
  if (opts.out_path.empty()) {
    out << text;
  } else {
    auto f = open_output(opts.out_path);
    f << text;
  }
}

std::filesystem::path dump_path(const std::string& out_path, double alpha) {
  std::filesystem::path p(out_path);
  const std::string stem = p.stem().string();
  return p.replace_filename(stem + "_H_alpha_" + format_real(alpha) + ".csv");
}

}  // namespace

int cmd_estimate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const RunConfig config = load_config(opts.config_path);
    const EstimateReport report = full_estimate(build_cocycle(config), estimate_params(config));
    if (opts.format == Format::Csv) {
      out << report_csv_header() << '\n' << report_csv_row(report) << '\n';
    } else {
      out << report_json(report).dump(2) << '\n';
    }
    if (!opts.out_path.empty()) {
      auto f = open_output(opts.out_path);
      f << report_csv_header() << '\n' << report_csv_row(report) << '\n';
    }
  });
}

int cmd_kappa_scan(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const RunConfig config = load_config(opts.config_path);
    const Cocycle base = build_cocycle(config);
    base.require_sl2();
    const std::vector<double> alphas = config.alpha ? std::vector<double>{*config.alpha} : config.alpha_grid;
    const int n_lo = config.iterate_n.value_or(1);
    const int n_hi = config.iterate_n.value_or(config.n_max);
    KappaOptions kopts;
    kopts.grid_size = config.kappa_grid;

    std::ostringstream csv;
    csv << "alpha,n,kappa_refined,kappa_upper\n";
    std::optional<Cocycle> last;
    for (int n = n_lo; n <= n_hi; ++n) {
      if (word_count(base.size(), n) > config.word_cap) {
        if (!last) throw CapExceededError(word_count(base.size(), n), config.word_cap);
        break;
      }
      last = iterate_cocycle(base, n, config.word_cap);
      for (double alpha : alphas) {
        const KappaCertificate cert = kappa_alpha(*last, alpha, kopts, n);
        csv << format_real(alpha) << ',' << n << ',' << format_real(cert.kappa_refined) << ','
            << format_real(cert.kappa_upper) << '\n';
      }
    }
    emit(opts, out, csv.str());

    // H_alpha profiles at the largest n scanned.
    if (!opts.out_path.empty() && last) {
      for (double alpha : alphas) {
        const auto values = h_alpha_profile(*last, alpha, config.kappa_grid);
        auto f = open_output(dump_path(opts.out_path, alpha).string());
        f << "theta,H_alpha\n";
        const double h = kPi / static_cast<double>(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
          f << format_real(static_cast<double>(i) * h) << ',' << format_real(values[i]) << '\n';
        }
      }
    }
  });
}

int cmd_measure_dump(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const RunConfig config = load_config(opts.config_path);
    const int n = config.iterate_n.value_or(1);
    const Cocycle iterated = iterate_cocycle(build_cocycle(config), n, config.word_cap);
    const Mesh mesh = config.mesh_points.empty() ? Mesh::uniform(config.mesh_N) : Mesh(config.mesh_points);
    const StationaryResult st = solve_stationary(iterated, mesh);

    std::ostringstream csv;
    csv << "# alpha: " << (config.alpha ? format_real(*config.alpha) : std::string("auto")) << '\n'
        << "# n: " << n << '\n'
        << "# N: " << mesh.size() << '\n'
        << "# residual: " << format_real(st.nu.residual) << '\n'
        << "theta,weight\n";
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      csv << format_real(mesh.point(i).theta()) << ',' << format_real(st.nu.weights[i]) << '\n';
    }
    emit(opts, out, csv.str());
  });
}

int cmd_mc(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const RunConfig config = load_config(opts.config_path);
    if (!config.mc) throw Error(ErrorCode::ConfigError, "field 'mc': missing, required by the mc command");
    const McEstimate m = mc_l1(build_cocycle(config), *config.mc);
    if (opts.format == Format::Csv) {
      emit(opts, out, mc_csv_header() + "\n" + mc_csv_row(m) + "\n");
    } else {
      emit(opts, out, mc_json(m).dump(2) + "\n");
    }
  });
}

}  // namespace lyapdisc::cli
