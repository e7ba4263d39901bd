#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <boost/math/tools/roots.hpp>

#include "chemofront/errors.hpp"

namespace chemofront {

/// Root of a continuous f with a sign change on [lo, hi], bracketed down to `tol`
/// (tol = 0 runs to machine precision).
template <class F>
double bisect_root(F&& f, double lo, double hi, double tol = 1e-12) {
  const double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw Error(ErrorKind::internal, "bisection bracket has no sign change");
  std::uintmax_t iterations = 400;
  const auto r = boost::math::tools::bisect(
      f, lo, hi, [tol](double a, double b) {
        constexpr double ulp = std::numeric_limits<double>::epsilon();
        return std::abs(b - a) <= std::max(tol, 4.0 * ulp * std::max(std::abs(a), std::abs(b)));
      }, iterations);
  return 0.5 * (r.first + r.second);
}

}  // namespace chemofront
