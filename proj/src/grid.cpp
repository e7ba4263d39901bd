#include "chemofront/grid.hpp"

#include <algorithm>
#include <string>

namespace chemofront {

double GridProfile::interpolate(double xq) const {
  const double s = (xq - x0) / dx;
  if (s <= 0.0) return values.front();
  const auto last = static_cast<double>(size() - 1);
  if (s >= last) return values.back();
  const auto i = static_cast<std::size_t>(s);
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

GridProfile uniform_grid(double x0, double x_end, double dx, double fill) {
  if (!(dx > 0.0) || !(x_end > x0))
    throw Error(ErrorKind::validation, "grid needs dx > 0 and x_end > x0");
  const auto cells = static_cast<std::size_t>(std::llround((x_end - x0) / dx));
  GridProfile g{x0, dx, std::vector<double>(cells + 1, fill)};
  validate(g);
  return g;
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double sup_distance(const GridProfile& a, const GridProfile& b) {
  require_same_grid(a, b, "sup_distance");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void require_same_grid(const GridProfile& a, const GridProfile& b, const char* what) {
  if (!a.same_grid(b)) throw Error(ErrorKind::shape, std::string(what) + ": grids differ");
}

void validate(const GridProfile& p) {
  if (p.size() < GridProfile::min_nodes)
    throw Error(ErrorKind::shape, "profile needs at least 16 nodes");
  if (!(p.dx > 0.0)) throw Error(ErrorKind::shape, "profile spacing must be positive");
  for (double v : p.values)
    if (!std::isfinite(v)) throw Error(ErrorKind::shape, "profile holds a non-finite value");
}

std::optional<double> rightmost_crossing(const GridProfile& p, double level) {
  for (std::size_t i = p.size() - 1; i-- > 0;) {
    if (p[i] >= level && p[i + 1] < level) {
      const double w = (p[i] - level) / (p[i] - p[i + 1]);
      return p.x(i) + w * p.dx;
    }
  }
  return std::nullopt;
}

}  // namespace chemofront
