#include <doctest.h>

#include <cmath>

#include "chemofront/wave.hpp"

using namespace chemofront;

namespace {

WaveOptions coarse() {
  WaveOptions o;
  o.x0 = -40.0;
  o.x_end = 60.0;
  o.dx = 0.1;
  o.dt = 0.01;
  o.uniqueness_check = false;
  return o;
}

double value_at(const GridProfile& u, double x) { return u[static_cast<std::size_t>(std::llround((x - u.x0) / u.dx))]; }

}  // namespace

TEST_CASE("chi = 0 reproduces the KPP wave of speed 2.5") {
  // U'' + 2.5 U' + U(1 - U) = 0, U ~ e^{-x/2}: solve_bvp values from tests/oracles/compute_oracles.py.
  // Relative tolerance 5e-3: the discrete tail rate is off by 8e-5 and the tail is pinned up to 70 units away.
  const std::array<std::pair<double, double>, 6> bvp{{{-10.0, 0.9655445253},
                                                      {0.0, 0.4110753862},
                                                      {2.0, 0.2314129007},
                                                      {5.0, 0.0713952456},
                                                      {10.0, 0.0066494041},
                                                      {20.0, 0.0000453958}}};
  const auto fam = FrontFamily::build(CoefficientPair::constant(1, 1), {0.0, 1.0, 1.0}, 0.5);
  WaveOptions o;
  o.uniqueness_check = false;
  const auto w = constant_wave(fam, o);
  CHECK(w.outer_iterations == 1);
  CHECK(w.residual_linf < 1e-4);
  for (const auto& [x, v] : bvp) CHECK(value_at(w.profiles.front(), x) == doctest::Approx(v).epsilon(5e-3).scale(0));
  CHECK(w.asymptotics.left_defect < 1e-6);
}

TEST_CASE("constant scenario: converged, monotone, inside the envelopes") {
  const auto fam = FrontFamily::build(CoefficientPair::constant(1, 1), {0.2, 1.0, 1.0}, 0.5);
  auto o = coarse();
  o.uniqueness_check = true;
  const auto w = constant_wave(fam, o);
  CHECK(w.residual_linf < 1e-4);
  CHECK(w.last_change < 1e-4);
  CHECK(w.outer_iterations > 1);
  CHECK(w.sandwich_margin <= 10 * o.dx * o.dx);
  CHECK(w.asymptotics.left_defect < 0.01);
  CHECK(w.asymptotics.right_defect < 0.05);
  REQUIRE(w.seed_distance);
  CHECK(*w.seed_distance < 10 * o.tol_wave);
  CHECK(w.warnings.empty());
  const auto& u = w.profiles.front();
  double rise = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) rise = std::max(rise, u[i] - u[i - 1]);
  CHECK(rise < o.tol_wave);  // monotone up to the convergence tolerance
  // psi of the left state: mu a / (lambda b) = 1
  CHECK(w.psi.front().psi[0] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("constant scenario agrees with a long lab-frame run") {
  const auto pair = CoefficientPair::constant(1, 1);
  const ChemoParams p{0.2, 1.0, 1.0};
  const auto fam = FrontFamily::build(pair, p, 0.5);
  auto o = coarse();
  const auto w = constant_wave(fam, o);

  const ImexStepper lab(pair, p, entire_logistic(pair));
  SolverState s;
  s.frame = Frame::lab;
  s.dt = 0.0025;  // IMEX Euler slows the tail by dt (1 - kappa^4) / (2 kappa); keep the 40-unit drift small
  s.u = sample(uniform_grid(-40.0, 160.0, 0.1), [&](double x) { return fam.phi_plus(x); });
  s.right.kind = RightBoundary::Kind::dirichlet_zero;
  const double t_end = 40.0;
  lab.evolve(s, t_end, nullptr);
  const double shift = 2.5 * t_end;
  double worst = 0.0;
  for (double x = -30.0; x <= 50.0; x += 0.5)
    worst = std::max(worst, std::abs(s.u.interpolate(x + shift) - w.profiles.front().interpolate(x)));
  CHECK(worst < 0.02);
}

TEST_CASE("periodic scenario on a coarse grid") {
  const CoefficientPair pair{Coefficient(PeriodicKind{1.0, {{0.5, 1.0, 0.0}}, 1.0}), Coefficient::constant(1.0)};
  const auto fam = FrontFamily::build(pair, {0.1, 1.0, 2.0}, 0.5);
  auto o = coarse();
  o.slices = 32;
  const auto w = fixed_point(fam, o);
  REQUIRE(w.period);
  CHECK(w.profiles.size() == 32);
  CHECK(w.periodicity_defect < 1e-3);
  CHECK(w.residual_linf < 1e-4);
  CHECK(w.asymptotics.left_defect < 0.02);
  CHECK(w.dt == doctest::Approx(1.0 / 128.0));
  // the left state follows u*(t), which is not constant
  CHECK(std::abs(w.profiles[0][0] - w.profiles[16][0]) > 0.1);
  // interpolation between slices
  const auto mid = w.at(0.5 / 32.0);
  CHECK(mid[300] == doctest::Approx(0.5 * (w.profiles[0][300] + w.profiles[1][300])));
  CHECK(w.at(1.0)[300] == doctest::Approx(w.profiles[0][300]));
}

TEST_CASE("seed translated by one cell converges to the same wave") {
  const auto fam = FrontFamily::build(CoefficientPair::constant(1, 1), {0.2, 1.0, 1.0}, 0.5);
  const auto o = coarse();
  const auto w = constant_wave(fam, o);
  auto seed = fam.sample_plus(uniform_grid(o.x0, o.x_end, o.dx));
  for (std::size_t i = seed.size() - 1; i > 0; --i) seed[i] = seed[i - 1];
  for (std::size_t i = 0; i < seed.size(); ++i) seed[i] = std::min(seed[i], fam.phi_plus(seed.x(i)));
  const std::vector<GridProfile> seeds{seed};
  const auto shifted = fixed_point(fam, o, &seeds);
  CHECK(sup_distance(shifted.profiles.front(), w.profiles.front()) < o.tol_wave);
}

TEST_CASE("preconditions") {
  const auto pair = CoefficientPair::constant(1, 1);
  CHECK_THROWS_AS(FrontFamily::build(pair, {0.2, 1.0, 1.0}, 0.9), Error);  // above kappa_chi
  CHECK_THROWS_AS(FrontFamily::build(pair, {0.0, 1.0, 1.0}, 1.0), Error);  // kappa = sqrt(abar)
  const auto fam = FrontFamily::build(pair, {0.2, 1.0, 1.0}, 0.5);
  auto o = coarse();
  o.x_end = 20.0;
  o.x0 = -20.0;  // 40 < 40 / 0.5
  CHECK_THROWS_AS(constant_wave(fam, o), Error);
  const CoefficientPair periodic{Coefficient(PeriodicKind{1.0, {{0.5, 1.0, 0.0}}, 1.0}), Coefficient::constant(1.0)};
  CHECK_THROWS_AS(constant_wave(FrontFamily::build(periodic, {0.1, 1.0, 2.0}, 0.5), coarse()), Error);
}
