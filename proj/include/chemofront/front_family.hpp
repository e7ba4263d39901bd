#pragma once

#include <random>

#include "chemofront/coefficients.hpp"
#include "chemofront/dispersion.hpp"
#include "chemofront/elliptic.hpp"
#include "chemofront/grid.hpp"

namespace chemofront {

double phi_kappa(double x, double kappa);

struct TurningPoints {
  double x_minus = 0.0;
  double x_plus = 0.0;
  double peak = 0.0;        ///< phi_lower(x_plus, t) = eps/(kappa+eps) e^{-kappa x_plus}
  double peak_bound = 0.0;  ///< (eps/kappa) e^{A(t) - (kappa+eps) x_plus}, equal to peak / d
};

/// The explicit envelope functions built from one set of front constants.
class FrontFamily {
 public:
  FrontFamily(CoefficientPair pair, ChemoParams params, FrontParams front);
  /// Constants from front_constants with the default epsilon.
  static FrontFamily build(const CoefficientPair& pair, const ChemoParams& params, double kappa);

  const CoefficientPair& pair() const noexcept { return pair_; }
  const ChemoParams& params() const noexcept { return params_; }
  const FrontParams& front() const noexcept { return front_; }
  double kappa() const noexcept { return front_.kappa; }
  double plateau() const noexcept { return front_.plateau; }
  /// c_kappa(t)
  double speed(double t) const { return speed_(t); }
  const WaveSpeed& speed_fn() const noexcept { return speed_; }

  double phi_plus(double x) const;
  double phi_lower(double x, double t) const;
  double phi_lower_dt(double x, double t) const;
  TurningPoints turning_points(double t) const;
  /// x(t; delta0): where phi_lower rises through delta0 between the turning points.
  double junction(double t) const;
  double phi_minus(double x, double t) const;

  GridProfile sample_plus(const GridProfile& grid) const;
  GridProfile sample_minus(const GridProfile& grid, double t) const;

 private:
  CoefficientPair pair_;
  ChemoParams params_;
  FrontParams front_;
  WaveSpeed speed_;
};

/// Discrete L_{kappa,phi}(u) with central differences; `dudt` is the time derivative
/// of u at t. The two end nodes are left at zero.
GridProfile residual_L(const GridProfile& u, const GridProfile& dudt, double t, const PsiField& field,
                       const FrontFamily& family);
/// Same, with the backward difference (u - u_prev) / h as the time derivative.
GridProfile residual_L(const GridProfile& u, const GridProfile& u_prev, double h, double t,
                       const PsiField& field, const FrontFamily& family);

/// phi_plus times clipped smooth random noise, so 0 <= phi <= phi_plus.
GridProfile random_admissible_phi(const GridProfile& grid, const FrontFamily& family, std::mt19937_64& rng);

struct EnvelopeCheck {
  double worst = 0.0;  ///< most adverse signed residual found
  std::size_t violations = 0;
};

struct EnvelopeSuite {
  double slack = 0.0;  ///< 10 dx^2
  EnvelopeCheck phi_kappa;  ///< super-solution: residual >= -slack
  EnvelopeCheck plateau;    ///< super-solution
  EnvelopeCheck lower;      ///< sub-solution on x >= x_minus(t): residual <= slack
  EnvelopeCheck constant;   ///< sub-solution for each tested delta
  std::vector<double> deltas;
  std::size_t fields = 0;
  std::vector<double> times;
  bool ok() const noexcept {
    return phi_kappa.violations + plateau.violations + lower.violations + constant.violations == 0;
  }
};

/// Residual signs of the four envelope functions against `n_random` random phi in E
/// (plus phi = phi_plus and phi = 0) at the given times.
EnvelopeSuite verify_envelopes(const FrontFamily& family, const GridProfile& grid, std::size_t n_random,
                               std::uint64_t seed, const std::vector<double>& times);

}  // namespace chemofront
