#pragma once

#include <stdexcept>
#include <string>

namespace qpwave {

// Error classes map onto process exit codes in the CLI:
//   validation  -> 2, runtime (non-convergence) -> 3, io -> 4.
enum class errc {
  dimension_mismatch,
  frequency_mismatch,
  invalid_argument,
  unknown_name,
  non_finite,
  symbol_evaluation,
  infeasible,
  data_ball,
  non_convergence,
  contraction_violation,
  io_failure,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::dimension_mismatch:    return "dimension_mismatch";
    case errc::frequency_mismatch:    return "frequency_mismatch";
    case errc::invalid_argument:      return "invalid_argument";
    case errc::unknown_name:          return "unknown_name";
    case errc::non_finite:            return "non_finite";
    case errc::symbol_evaluation:     return "symbol_evaluation";
    case errc::infeasible:            return "infeasible";
    case errc::data_ball:             return "data_ball";
    case errc::non_convergence:       return "non_convergence";
    case errc::contraction_violation: return "contraction_violation";
    case errc::io_failure:            return "io_failure";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what_arg)
      : std::runtime_error(what_arg), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
  throw error(code, msg);
}

}  // namespace qpwave
