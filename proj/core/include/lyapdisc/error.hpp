#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lyapdisc {

enum class ErrorCode {
  InvalidArgument,
  NonInvertible,
  NotSl2,
  DegeneratePair,
  BadParam,
  CapExceeded,
  NoContraction,
  NotMixing,
  NoConvergence,
  ConfigError,
};

// Stable identifier used in machine-readable error objects ("NotMixing", ...).
std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by cocycle iteration when k^n words would exceed the configured cap.
class CapExceededError : public Error {
 public:
  CapExceededError(std::uint64_t required, std::uint64_t cap);

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(double residual, std::size_t iterations);

  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

}  // namespace lyapdisc
