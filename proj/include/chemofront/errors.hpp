#pragma once

#include <stdexcept>
#include <string>

namespace chemofront {

enum class ErrorKind {
  // hypothesis / validation failures (CLI exit status 1)
  hypothesis_violation,
  domain,
  invalid_window,
  validation,
  parse,
  tail_mismatch,
  shape,
  // numerical failures (CLI exit status 2)
  relaxation_failure,
  constant_sign,
  junction_not_found,
  timestep,
  divergence,
  back_window,
  fixed_point_stall,
  set_escape,
  tracking_loss,
  internal,
};

const char* to_string(ErrorKind kind);

/// True for failures caused by the inputs rather than by the numerics.
bool is_input_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chemofront
