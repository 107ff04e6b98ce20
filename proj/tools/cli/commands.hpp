#pragma once

#include <iosfwd>
#include <string>

namespace lyapdisc::cli {

enum class Format { Json, Csv };

struct CommandOptions {
  std::string config_path;
  std::string out_path;
  Format format = Format::Json;
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoContraction = 3;
inline constexpr int kExitNotMixing = 4;
inline constexpr int kExitCapExceeded = 5;

// Each command writes its result to `out` and returns an exit code. Library
// errors become a JSON error object on `out` and a one-line message on `err`.
int cmd_estimate(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_kappa_scan(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_measure_dump(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_mc(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace lyapdisc::cli
