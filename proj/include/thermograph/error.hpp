#pragma once

#include <stdexcept>
#include <string>

namespace thermograph {

enum class Errc {
  invalid_argument,
  all_boundary,
  degenerate_sites,
  separation_unachievable,
  non_finite_field,
  negative_temperature,
  no_convergence,
  interior_disconnected,
  singular_system,
  parse_error,
};

const char* errc_name(Errc code) noexcept;

/// Error raised by every library operation. The code identifies the failure
/// class named in the operation contracts (AllBoundary, NonFiniteField, ...).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Thrown by simulate when the field stops being finite.
class NonFiniteFieldError : public Error {
 public:
  NonFiniteFieldError(std::size_t step, const std::string& message)
      : Error(Errc::non_finite_field, message), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace thermograph
