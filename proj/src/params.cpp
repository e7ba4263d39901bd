#include "chemofront/params.hpp"

#include <cmath>

#include "chemofront/errors.hpp"

namespace chemofront {

void validate(const ChemoParams& p) {
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda))
    throw Error(ErrorKind::validation, "lambda must be positive");
  if (!(p.mu > 0.0) || !std::isfinite(p.mu)) throw Error(ErrorKind::validation, "mu must be positive");
  if (!(p.chi >= 0.0) || !std::isfinite(p.chi))
    throw Error(ErrorKind::validation, "chi must be non-negative");
}

}  // namespace chemofront
