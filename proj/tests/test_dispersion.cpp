#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chemofront/dispersion.hpp"
#include "chemofront/errors.hpp"

using namespace chemofront;

namespace {

// Reference values from tests/oracles/compute_oracles.py (40-digit mpmath).
constexpr double kappa_chi_ratio4 = 0.8421229397547598;
constexpr double c_star_ratio4 = 2.029598013514437;
constexpr double lambda_chi_ratio4 = 1.410097050800552;
constexpr double A1_const = 1.248803387171258;
constexpr double A2_const = 0.7934615859097789;
constexpr double d_const = 1.125119775943218;

CoefficientPair periodic_a() {
  return {Coefficient(PeriodicKind{1.0, {{0.5, 1.0, 0.0}}, 1.0}), Coefficient::constant(1.0)};
}

}  // namespace

TEST_CASE("eta") {
  CHECK(eta(1e-9, 1.0) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(eta(1.0 / std::sqrt(2.0), 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eta(0.8, 1.0) == doctest::Approx(3.111111111111111).epsilon(1e-14));
  CHECK_THROWS_AS(eta(1.0, 1.0), Error);
  CHECK_THROWS_AS(eta(0.0, 1.0), Error);
}

TEST_CASE("eta is strictly increasing") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(0.5, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double l = lam(rng);
    double prev = 0.0;
    for (int i = 1; i < 1000; ++i) {
      const double v = eta(std::sqrt(l) * i / 1000.0, l);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("kappa_chi") {
  // lambda = 1, b_inf = 3, chi mu = 1: ratio 2
  auto k = kappa_chi({1.0, 1.0, 1.0}, 3.0);
  CHECK(k.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_FALSE(k.chemotaxis_absent);
  k = kappa_chi({0.2, 1.0, 1.0}, 1.0);  // ratio 4
  CHECK(k.value == doctest::Approx(kappa_chi_ratio4).epsilon(1e-12));
  CHECK(eta(0.8, 1.0) < 4.0);
  CHECK(eta(0.85, 1.0) > 4.0);
  // chi mu -> 0: kappa_chi -> sqrt(lambda)
  CHECK(kappa_chi({1e-9, 1.0, 1.0}, 1.0).value > 0.9999);
  const auto absent = kappa_chi({0.0, 1.0, 4.0}, 1.0);
  CHECK(absent.chemotaxis_absent);
  CHECK(absent.value == 2.0);
  CHECK_THROWS_AS(kappa_chi({1.0, 1.0, 1.0}, 1.0), Error);
}

TEST_CASE("kappa_chi round-trips through eta") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lam(0.5, 10.0), cm(0.05, 1.0), factor(1.05, 20.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double l = lam(rng), chimu = cm(rng), b = chimu * factor(rng);
    const double k = kappa_chi({chimu, 1.0, l}, b).value;
    CHECK(std::abs(eta(k, l) - (b - chimu) / chimu) < 1e-10);
  }
}

TEST_CASE("c_star") {
  // kappa_chi >= sqrt(abar): classical 2 sqrt(abar)
  auto cs = c_star({0.01, 1.0, 4.0}, CoefficientPair::constant(1.0, 1.0));
  CHECK(cs.kappa_star == 1.0);
  CHECK(cs.c_star == 2.0);
  // ratio 4, abar = 1 (periodic a)
  cs = c_star({0.2, 1.0, 1.0}, periodic_a());
  CHECK(cs.kappa_star == doctest::Approx(kappa_chi_ratio4).epsilon(1e-12));
  CHECK(cs.c_star == doctest::Approx(c_star_ratio4).epsilon(1e-12));
  CHECK_THROWS_AS(c_star({0.6, 1.0, 1.0}, CoefficientPair::constant(1.0, 1.0)), Error);
}

TEST_CASE("c_star formula when kappa_chi < sqrt(abar)") {
  // a = 4 (sqrt = 2), lambda = 1 forces kappa_chi < 1 < 2.
  const auto cs = c_star({0.05, 1.0, 1.0}, CoefficientPair::constant(4.0, 1.0));
  CHECK(cs.kappa_star == cs.kappa_chi);
  CHECK(cs.c_star == doctest::Approx((4.0 + cs.kappa_chi * cs.kappa_chi) / cs.kappa_chi));
}

TEST_CASE("wave speed function") {
  auto c = wave_speed_fn(CoefficientPair::constant(1, 1), 0.5);
  CHECK(c(3.0) == 2.5);
  CHECK(c.lower_mean() == 2.5);
  CHECK(wave_speed_fn(CoefficientPair::constant(1, 1), 1.0).lower_mean() == 2.0);
  c = wave_speed_fn(periodic_a(), 0.5);
  CHECK(c(0.25) == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(c.lower_mean() == 2.5);
  CHECK(c.displacement(1.0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK_THROWS_AS(wave_speed_fn(periodic_a(), 0.0), Error);
}

TEST_CASE("choose_epsilon") {
  const ChemoParams p{0.2, 1.0, 1.0};
  // first cap min{0.5, 1.5} = 0.5; second condition slack for all eps <= 0.5
  CHECK(choose_epsilon(CoefficientPair::constant(1, 1), p, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
  // near sqrt(abar) the cap (abar - kappa^2)/kappa vanishes
  const ChemoParams weak{1e-4, 1.0, 4.0};
  CHECK(choose_epsilon(CoefficientPair::constant(1, 1), weak, 0.999) < 1.1e-3);
  CHECK_THROWS_AS(choose_epsilon(CoefficientPair::constant(1, 1), p, 0.9), Error);

  // Second condition binding: larger chi mu pulls the admissible range below the cap.
  const ChemoParams strong{0.3, 1.0, 1.0};
  const auto pair = CoefficientPair::constant(1.0, 1.0);
  const double kc = kappa_chi(strong, 1.0).value;
  const double kappa = 0.9 * kc;
  const double e = choose_epsilon(pair, strong, kappa);
  const double ratio = (1.0 - 0.3) / 0.3, gap = 1.0 - kappa * kappa;
  // Oracle: scan eps on a fine grid for the first inadmissible value.
  double sup = 0.0;
  for (int i = 1; i <= 200000; ++i) {
    const double x = std::min(kappa, (1.0 - kappa * kappa) / kappa) * i / 200000.0;
    const bool ok = ratio > ((kappa + x) * (std::sqrt(gap) + kappa) - 1.0) / gap;
    if (!ok) break;
    sup = x;
  }
  CHECK(e == doctest::Approx(0.5 * sup).epsilon(1e-4));
}

TEST_CASE("front constants: constant scenario") {
  const auto pair = CoefficientPair::constant(1.0, 1.0);
  const auto fp = front_constants(pair, {0.2, 1.0, 1.0}, 0.5, 0.25);
  CHECK(fp.A.is_zero());
  CHECK(fp.A0 == doctest::Approx(0.15625).epsilon(1e-15));
  CHECK(fp.A1 == doctest::Approx(A1_const).epsilon(1e-13));
  CHECK(fp.A2 == doctest::Approx(A2_const).epsilon(1e-13));
  CHECK(fp.d == doctest::Approx(d_const).epsilon(1e-13));
  CHECK(fp.plateau == doctest::Approx(1.25));
  CHECK(fp.delta_cap == doctest::Approx(0.9375));
  CHECK(fp.inf_peak == doctest::Approx(0.1040159530006904).epsilon(1e-12));
  CHECK(fp.delta0 == doctest::Approx(0.5 * 0.1040159530006904).epsilon(1e-12));
}

TEST_CASE("front constants: periodic A(t)") {
  const auto pair = periodic_a();
  const ChemoParams p{0.1, 1.0, 2.0};
  const auto fp = front_constants(pair, p, 0.5, 0.25);
  // sup|A| = eps * 0.5 / (kappa * pi), frozen from quadrature of the integral definition
  CHECK(fp.A.sup_norm() == doctest::Approx(0.07957747154594767).epsilon(1e-10));
  CHECK(fp.A(0.0) == 0.0);
  CHECK(fp.A(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(fp.A(0.5) == doctest::Approx(-0.07957747154594767).epsilon(1e-12));
  CHECK(fp.d == doctest::Approx(std::exp(fp.A.sup_norm()) * (1.0 + fp.A0 / fp.A1)));
  // growth inequality: A' + eps (c - 2 kappa - eps) equals 2 A0 identically
  const auto c = wave_speed_fn(pair, 0.5);
  for (int i = 0; i < 10000; ++i) {
    const double t = -3.0 + 7.0 * i / 10000.0;
    const double lhs = fp.A.derivative(t) + fp.epsilon * (c(t) - 2 * fp.kappa - fp.epsilon);
    CHECK(lhs >= 2.0 * fp.A0 * (1.0 - 1e-9));
  }
  CHECK(fp.delta0 < std::min(fp.delta_cap, fp.inf_peak));
}

TEST_CASE("front constants reject sampled coefficients and bad epsilon") {
  SampledKind s{{0.0, 1.0, 2.0}, {1.0, 1.2, 1.0}};
  const CoefficientPair pair{Coefficient(s), Coefficient::constant(1.0)};
  CHECK_THROWS_AS(front_constants(pair, {0.1, 1.0, 1.0}, 0.3, 0.1), Error);
  CHECK_THROWS_AS(front_constants(CoefficientPair::constant(1, 1), {0.2, 1, 1}, 0.5, 0.6), Error);
}

TEST_CASE("lambda threshold") {
  // abar = 1, ratio 4 (b_inf = 1, chi mu = 0.2)
  const auto pair = periodic_a();
  const auto lt = lambda_threshold({0.2, 1.0, 1.0}, pair);
  CHECK(lt.value == doctest::Approx(lambda_chi_ratio4).epsilon(1e-12));
  // consistency: kappa_chi at lambda_chi equals sqrt(abar)
  CHECK(kappa_chi({0.2, 1.0, lt.value}, 1.0).value == doctest::Approx(1.0).epsilon(1e-9));
  // closed form: sqrt(lambda - abar) = (1 + sqrt(1 + 4 ratio)) / (2 ratio) for abar = 1
  const double root = (1.0 + std::sqrt(17.0)) / 8.0;
  CHECK(lt.value == doctest::Approx(1.0 + root * root).epsilon(1e-13));
  // limits
  CHECK(lambda_threshold({1e-6, 1.0, 1.0}, CoefficientPair::constant(1, 1)).value < 1.0 + 1e-5);
  CHECK(lambda_threshold({0.99, 1.0, 1.0}, CoefficientPair::constant(1, 1)).value > 1e3);
  CHECK(lambda_threshold({0.0, 1.0, 1.0}, pair).chemotaxis_absent);
}

TEST_CASE("c_star pins at 2 sqrt(abar) beyond lambda_chi") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> a(0.5, 3.0), cm(0.02, 0.2), over(1.01, 5.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double abar = a(rng), chimu = cm(rng);
    const auto pair = CoefficientPair::constant(abar, 1.0 + abar);
    const auto lt = lambda_threshold({chimu, 1.0, 1.0}, pair);
    const ChemoParams past{chimu, 1.0, lt.value * over(rng)};
    if (!check_hypotheses(pair, past).h1) continue;
    CHECK(c_star(past, pair).c_star == 2.0 * std::sqrt(abar));
  }
}

TEST_CASE("small chi criterion") {
  const auto pair = CoefficientPair::constant(1.0, 1.0);
  CHECK(small_chi_criterion({0.2, 1.0, 2.0}, pair));   // 0.2 < 1/3
  CHECK_FALSE(small_chi_criterion({0.45, 1.0, 2.0}, pair));
  CHECK(small_chi_criterion({0.0, 1.0, 2.0}, pair));
  CHECK_THROWS_AS(small_chi_criterion({0.1, 1.0, 1.0}, pair), Error);
  CHECK(c_star({0.2, 1.0, 2.0}, pair).c_star == 2.0);
}
