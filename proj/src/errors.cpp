#include "chemofront/errors.hpp"

namespace chemofront {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::hypothesis_violation: return "hypothesis violation";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::invalid_window: return "invalid window";
    case ErrorKind::validation: return "validation error";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::tail_mismatch: return "tail mismatch";
    case ErrorKind::shape: return "shape error";
    case ErrorKind::relaxation_failure: return "relaxation failure";
    case ErrorKind::constant_sign: return "constant sign error";
    case ErrorKind::junction_not_found: return "junction not found";
    case ErrorKind::timestep: return "timestep error";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::back_window: return "back-window error";
    case ErrorKind::fixed_point_stall: return "fixed-point stall";
    case ErrorKind::set_escape: return "set escape";
    case ErrorKind::tracking_loss: return "tracking loss";
    case ErrorKind::internal: return "internal error";
  }
  return "unknown error";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::hypothesis_violation:
    case ErrorKind::domain:
    case ErrorKind::invalid_window:
    case ErrorKind::validation:
    case ErrorKind::parse:
    case ErrorKind::tail_mismatch:
    case ErrorKind::shape:
      return true;
    default:
      return false;
  }
}

}  // namespace chemofront
