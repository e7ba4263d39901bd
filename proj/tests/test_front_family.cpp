#include <doctest.h>

#include <cmath>
#include <random>

#include "chemofront/front_family.hpp"

using namespace chemofront;

namespace {

// tests/oracles/compute_oracles.py
constexpr double x_minus_const = 0.4715579899768154;
constexpr double x_plus_const = 2.093418422409473;
constexpr double gap_const = 1.621860432432658;
constexpr double peak_const = 0.1170304057346571;
constexpr double peak_bound_const = 0.1040159530006904;

FrontFamily constant_family() {
  return FrontFamily(CoefficientPair::constant(1, 1), {0.2, 1.0, 1.0},
                     front_constants(CoefficientPair::constant(1, 1), {0.2, 1.0, 1.0}, 0.5, 0.25));
}

FrontFamily periodic_family() {
  const CoefficientPair pair{Coefficient(PeriodicKind{1.0, {{0.5, 1.0, 0.0}}, 1.0}), Coefficient::constant(1.0)};
  return FrontFamily::build(pair, {0.1, 1.0, 2.0}, 0.5);
}

}  // namespace

TEST_CASE("phi_kappa and the linear identity") {
  CHECK(phi_kappa(0.0, 0.7) == 1.0);
  CHECK(phi_kappa(2.0, 0.5) == doctest::Approx(std::exp(-1.0)));
  const auto fam = periodic_family();
  for (double t : {0.0, 0.1, 0.37, 0.8}) {
    const double k = fam.kappa();
    CHECK(std::abs(k * k - k * fam.speed(t) + fam.pair().a(t)) < 1e-14);
  }
}

TEST_CASE("phi_plus") {
  const auto fam = constant_family();
  CHECK(fam.phi_plus(-10.0) == doctest::Approx(1.25));
  CHECK(fam.phi_plus(10.0) == doctest::Approx(6.737946999085467e-3));
  const double cross = -std::log(1.25) / 0.5;
  CHECK(cross == doctest::Approx(-0.4462871026284195));
  CHECK(fam.phi_plus(cross) == doctest::Approx(1.25).epsilon(1e-14));
  double prev = fam.phi_plus(-20.0);
  for (double x = -20.0; x < 20.0; x += 0.01) {
    CHECK(fam.phi_plus(x) <= prev);
    prev = fam.phi_plus(x);
  }
}

TEST_CASE("turning points: constant scenario") {
  const auto fam = constant_family();
  const auto tp = fam.turning_points(3.0);
  CHECK(tp.x_minus == doctest::Approx(x_minus_const).epsilon(1e-13));
  CHECK(tp.x_plus == doctest::Approx(x_plus_const).epsilon(1e-13));
  CHECK(tp.x_plus - tp.x_minus == doctest::Approx(gap_const).epsilon(1e-13));
  CHECK(tp.peak == doctest::Approx(peak_const).epsilon(1e-12));
  CHECK(tp.peak_bound == doctest::Approx(peak_bound_const).epsilon(1e-12));
  CHECK(fam.phi_lower(tp.x_plus, 3.0) == doctest::Approx(peak_const).epsilon(1e-12));
  CHECK(std::abs(fam.phi_lower(tp.x_minus, 3.0)) < 1e-12);
  CHECK(fam.phi_lower(60.0, 0.0) / std::exp(-30.0) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("envelope structure over time") {
  const auto fam = periodic_family();
  const double k = fam.kappa(), e = fam.front().epsilon;
  const double gap = std::log((k + e) / k) / e;
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> tdist(-50.0, 50.0), xdist(-20.0, 40.0);
  double inf_peak = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const double t = tdist(rng);
    const auto tp = fam.turning_points(t);
    CHECK(std::abs(tp.x_plus - tp.x_minus - gap) < 1e-12);
    CHECK(std::abs(fam.phi_lower(tp.x_minus, t)) < 1e-12);
    CHECK(std::abs(fam.phi_lower(tp.x_plus, t) - tp.peak) < 1e-12);
    CHECK(std::abs(tp.peak_bound * fam.front().d - tp.peak) < 1e-12);
    inf_peak = std::min(inf_peak, tp.peak_bound);

    const double x = xdist(rng);
    CHECK((x - tp.x_minus) * fam.phi_lower(x, t) >= 0.0);
    // increasing left of x_plus, decreasing right of it
    const double h = 1e-3;
    if (x < tp.x_plus - h) CHECK(fam.phi_lower(x + h, t) > fam.phi_lower(x, t));
    if (x > tp.x_plus + h) CHECK(fam.phi_lower(x + h, t) < fam.phi_lower(x, t));
    CHECK(fam.phi_minus(x, t) <= fam.phi_plus(x));
    CHECK(fam.phi_minus(x, t) >= 0.0);
  }
  CHECK(inf_peak > 0.0);
  CHECK(inf_peak >= fam.front().inf_peak * (1 - 1e-12));
}

TEST_CASE("phi_minus junction") {
  const auto fam = constant_family();
  const double xj = fam.junction(0.0);
  const auto tp = fam.turning_points(0.0);
  CHECK(xj > tp.x_minus);
  CHECK(xj < tp.x_plus);
  CHECK(std::abs(fam.phi_lower(xj, 0.0) - fam.front().delta0) < 1e-10);
  CHECK(fam.phi_minus(-100.0, 0.0) == fam.front().delta0);
  CHECK(std::abs(fam.phi_minus(xj - 1e-12, 0.0) - fam.phi_minus(xj + 1e-12, 0.0)) < 1e-10);
  CHECK(fam.phi_plus(80.0) / fam.phi_minus(80.0, 0.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("residual_L at a constant state") {
  // a = b = lambda = mu = 1, u = 1, phi = 1: reaction 1 - chi - 1 + chi = 0.
  const auto fam = FrontFamily::build(CoefficientPair::constant(1, 1), {0.2, 1.0, 1.0}, 0.5);
  const auto grid = uniform_grid(-10.0, 10.0, 0.05);
  const auto one = grid.like(1.0);
  const auto field = green_convolve(one, {TailSide::constant(1.0), TailSide::constant(1.0)}, 1.0, 1.0);
  const auto r = residual_L(one, one, 0.1, 0.0, field, fam);
  for (double v : r.values) CHECK(std::abs(v) < 1e-12);
  CHECK_THROWS_AS(residual_L(one, uniform_grid(-10.0, 10.0, 0.1), 0.0, field, fam), Error);
}

TEST_CASE("envelope residual suite: constant scenario") {
  const auto fam = constant_family();
  const auto grid = uniform_grid(-60.0, 60.0, 0.05);
  const auto suite = verify_envelopes(fam, grid, 20, 1234, {0.0});
  CHECK(suite.phi_kappa.violations == 0);
  CHECK(suite.plateau.violations == 0);
  CHECK(suite.lower.violations == 0);
  CHECK(suite.constant.violations == 0);
  CHECK(suite.deltas.back() == doctest::Approx(0.9375));
}

TEST_CASE("envelope residual suite: periodic scenario") {
  const auto fam = periodic_family();
  const auto grid = uniform_grid(-40.0, 60.0, 0.05);
  const auto suite = verify_envelopes(fam, grid, 10, 99, {0.0, 0.125, 0.25, 0.5, 0.75, 0.9});
  CHECK(suite.ok());
}

TEST_CASE("random admissible phi lies in E") {
  const auto fam = constant_family();
  const auto grid = uniform_grid(-30.0, 30.0, 0.1);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto phi = random_admissible_phi(grid, fam, rng);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(phi[i] >= 0.0);
      CHECK(phi[i] <= fam.phi_plus(grid.x(i)));
    }
  }
}
