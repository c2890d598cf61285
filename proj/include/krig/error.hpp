#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace krig {

// Machine-readable error category. The CLI maps user/config errors onto
// exit code 2 and numerical errors onto exit code 3.
enum class errc {
  invalid_argument,
  dimension_mismatch,
  parse_error,
  io_error,
  budget_exceeded,
  singular_system,
  not_positive_definite,
  numeric_inconsistency,
  statistical_check_failed,
};

inline const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::invalid_argument: return "invalid_argument";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::parse_error: return "parse_error";
    case errc::io_error: return "io_error";
    case errc::budget_exceeded: return "budget_exceeded";
    case errc::singular_system: return "singular_system";
    case errc::not_positive_definite: return "not_positive_definite";
    case errc::numeric_inconsistency: return "numeric_inconsistency";
    case errc::statistical_check_failed: return "statistical_check_failed";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  errc code() const noexcept { return code_; }

  // True for errors caused by bad input or configuration, as opposed to
  // numerical failures encountered during a well-formed computation.
  bool is_user_error() const noexcept {
    switch (code_) {
      case errc::invalid_argument:
      case errc::dimension_mismatch:
      case errc::parse_error:
      case errc::io_error:
      case errc::budget_exceeded:
        return true;
      default:
        return false;
    }
  }

 private:
  errc code_;
};

[[noreturn]] inline void throw_dimension_mismatch(std::size_t a, std::size_t b,
                                                  const std::string& context) {
  throw Error(errc::dimension_mismatch,
              context + ": dimension mismatch (" + std::to_string(a) +
                  " vs " + std::to_string(b) + ")");
}

}  // namespace krig
