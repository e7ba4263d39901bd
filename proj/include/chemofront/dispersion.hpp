#pragma once

#include <optional>

#include "chemofront/coefficients.hpp"
#include "chemofront/params.hpp"

namespace chemofront {

/// eta(kappa) = kappa (sqrt(lambda - kappa^2) + kappa) / (lambda - kappa^2), for 0 < kappa < sqrt(lambda).
double eta(double kappa, double lambda);

struct KappaChi {
  double value = 0.0;
  bool chemotaxis_absent = false;  ///< chi == 0: value is the sqrt(lambda) sentinel
};

/// Unique root in (0, sqrt(lambda)) of eta(kappa) = (b_inf - chi mu) / (chi mu).
KappaChi kappa_chi(const ChemoParams& params, double b_inf);

struct CriticalSpeed {
  double kappa_chi = 0.0;
  double kappa_star = 0.0;
  double c_star = 0.0;
};

/// kappa* = min{kappa_chi, sqrt(abar)}, c* = (abar + kappa*^2) / kappa*.
CriticalSpeed c_star(const ChemoParams& params, const CoefficientPair& pair);

/// Frame speed c_kappa(t) = (a(t) + kappa^2) / kappa.
class WaveSpeed {
 public:
  WaveSpeed(const CoefficientPair& pair, double kappa);

  double operator()(double t) const { return (a_(t) + kappa_ * kappa_) / kappa_; }
  /// C(t) = integral of c_kappa over [0, t].
  double displacement(double t) const { return (a_.integral(0.0, t) + kappa_ * kappa_ * t) / kappa_; }
  double lower_mean() const noexcept { return lower_mean_; }
  double kappa() const noexcept { return kappa_; }

 private:
  Coefficient a_;
  double kappa_;
  double lower_mean_;
};

WaveSpeed wave_speed_fn(const CoefficientPair& pair, double kappa);

/// A(t) = (eps/kappa) * integral_0^t (abar - a(s)) ds for periodic a; zero for constant a.
class ExponentShift {
 public:
  ExponentShift() = default;
  ExponentShift(const CoefficientPair& pair, double kappa, double epsilon);

  double operator()(double t) const;
  double derivative(double t) const;
  double sup_norm() const noexcept { return sup_norm_; }
  double sup() const noexcept { return sup_; }
  bool is_zero() const noexcept { return !a_; }

 private:
  std::optional<Coefficient> a_;
  double scale_ = 0.0;
  double mean_ = 0.0;
  double sup_ = 0.0;
  double sup_norm_ = 0.0;
};

/// Constants driving the sub/super-solution family.
struct FrontParams {
  double kappa = 0.0;
  double epsilon = 0.0;
  ExponentShift A;
  double A0 = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double d = 1.0;
  double delta0 = 0.0;
  double kappa_chi = 0.0;
  double c_star = 0.0;
  double plateau = 0.0;    ///< a_sup / (b_inf - chi mu)
  double delta_cap = 0.0;  ///< largest constant sub-solution level
  double inf_peak = 0.0;   ///< inf over t of the lower profile's maximum
};

/// Half the supremum of the epsilons admissible for kappa.
double choose_epsilon(const CoefficientPair& pair, const ChemoParams& params, double kappa);

FrontParams front_constants(const CoefficientPair& pair, const ChemoParams& params, double kappa,
                            double epsilon);

/// Convenience: front_constants(pair, params, kappa, choose_epsilon(...)).
FrontParams front_constants(const CoefficientPair& pair, const ChemoParams& params, double kappa);

struct LambdaThreshold {
  double value = 0.0;
  bool chemotaxis_absent = false;  ///< chi == 0: value is the abar sentinel
};

/// lambda_chi > abar: beyond it c* is the classical 2 sqrt(abar).
LambdaThreshold lambda_threshold(const ChemoParams& params, const CoefficientPair& pair);

/// Sufficient small-chi condition for c* = 2 sqrt(abar); needs lambda > abar.
bool small_chi_criterion(const ChemoParams& params, const CoefficientPair& pair);

}  // namespace chemofront
