#include "lyapdisc/error.hpp"

#include <sstream>

namespace lyapdisc {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonInvertible: return "NonInvertible";
    case ErrorCode::NotSl2: return "NotSl2";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::BadParam: return "BadParam";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NoContraction: return "NoContraction";
    case ErrorCode::NotMixing: return "NotMixing";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string cap_message(std::uint64_t required, std::uint64_t cap) {
  std::ostringstream os;
  os << "iterated cocycle needs " << required << " words, cap is " << cap;
  return os.str();
}

std::string convergence_message(double residual, std::size_t iterations) {
  std::ostringstream os;
  os << "power iteration stalled after " << iterations
     << " iterations with residual " << residual;
  return os.str();
}

}  // namespace

CapExceededError::CapExceededError(std::uint64_t required, std::uint64_t cap)
    : Error(ErrorCode::CapExceeded, cap_message(required, cap)),
      required_(required),
      cap_(cap) {}

NoConvergenceError::NoConvergenceError(double residual, std::size_t iterations)
    : Error(ErrorCode::NoConvergence, convergence_message(residual, iterations)),
      residual_(residual),
      iterations_(iterations) {}

}  // namespace lyapdisc
