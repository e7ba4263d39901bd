#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "chemofront/errors.hpp"

namespace chemofront {

/// Uniform 1D grid with sampled values. Node i sits at x0 + i*dx.
struct GridProfile {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<double> values;

  static constexpr std::size_t min_nodes = 16;

  std::size_t size() const noexcept { return values.size(); }
  double x(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * dx; }
  double x_end() const noexcept { return x(values.size() - 1); }

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  std::span<const double> view() const noexcept { return values; }

  /// Same grid, values set to `fill`.
  GridProfile like(double fill = 0.0) const { return GridProfile{x0, dx, std::vector<double>(size(), fill)}; }

  /// Linear interpolation; clamps outside the grid.
  double interpolate(double xq) const;

  bool same_grid(const GridProfile& other) const noexcept {
    return size() == other.size() && x0 == other.x0 && dx == other.dx;
  }
};

/// Nodes x0, x0+dx, ..., up to and including x_end (rounded to the nearest node count).
GridProfile uniform_grid(double x0, double x_end, double dx, double fill = 0.0);

template <class F>
GridProfile sample(const GridProfile& grid, F&& f) {
  GridProfile out = grid.like();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(out.x(i));
  return out;
}

double sup_norm(std::span<const double> v);
double sup_distance(const GridProfile& a, const GridProfile& b);

void require_same_grid(const GridProfile& a, const GridProfile& b, const char* what);
void validate(const GridProfile& p);

/// Rightmost x where the profile falls through `level` (linear interpolation between nodes).
std::optional<double> rightmost_crossing(const GridProfile& p, double level);

}  // namespace chemofront
