#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "chemofront/params.hpp"

namespace chemofront {

/// amplitude * sin(2*pi*frequency*t + phase); frequency in cycles per unit time.
struct SinusoidTerm {
  double amplitude = 0.0;
  double frequency = 1.0;
  double phase = 0.0;
};

struct ConstantKind {
  double value = 1.0;
};

struct PeriodicKind {
  double mean = 1.0;
  std::vector<SinusoidTerm> terms;
  double period = 1.0;
};

/// Linear interpolation between samples, clamped to the end values outside.
struct SampledKind {
  std::vector<double> times;
  std::vector<double> values;
};

using CoefficientKind = std::variant<ConstantKind, PeriodicKind, SampledKind>;

struct LeastMeanOptions {
  double window_min = 1.0;
  double horizon = 4.0;
  double lattice = 0.0;  ///< start-time spacing; 0 picks window_min / 16
};

/// One time-dependent logistic coefficient with its cached statistics.
class Coefficient {
 public:
  explicit Coefficient(CoefficientKind kind);
  static Coefficient constant(double value) { return Coefficient(ConstantKind{value}); }

  double operator()(double t) const;
  /// Exact integral of the coefficient over [t0, t1].
  double integral(double t0, double t1) const;

  const CoefficientKind& kind() const noexcept { return kind_; }
  bool is_constant() const noexcept { return std::holds_alternative<ConstantKind>(kind_); }
  bool is_periodic() const noexcept { return std::holds_alternative<PeriodicKind>(kind_); }
  std::optional<double> period() const;

  double inf() const noexcept { return inf_; }
  double sup() const noexcept { return sup_; }
  double lower_mean() const noexcept { return lower_mean_; }
  double upper_mean() const noexcept { return upper_mean_; }
  /// Set for sampled data, whose means come from a finite horizon.
  bool means_estimated() const noexcept { return means_estimated_; }

 private:
  double antiderivative(double t) const;

  CoefficientKind kind_;
  std::vector<double> cumulative_;  // sampled kind: integral up to each sample
  double inf_ = 0.0, sup_ = 0.0, lower_mean_ = 0.0, upper_mean_ = 0.0;
  bool means_estimated_ = false;
};

/// The logistic coefficients a(t), b(t).
struct CoefficientPair {
  Coefficient a;
  Coefficient b;

  std::pair<double, double> operator()(double t) const { return {a(t), b(t)}; }
  bool is_constant() const noexcept { return a.is_constant() && b.is_constant(); }
  /// Common period when both are constant or periodic (constants take the other's period).
  std::optional<double> common_period() const;

  static CoefficientPair constant(double a, double b) {
    return {Coefficient::constant(a), Coefficient::constant(b)};
  }
};

std::pair<double, double> eval_coeffs(const CoefficientPair& pair, double t);

enum class Which { a, b };

struct MeanEstimate {
  double value = 0.0;
  bool estimated = false;
};

MeanEstimate least_mean(const Coefficient& f, const LeastMeanOptions& opts);
MeanEstimate greatest_mean(const Coefficient& f, const LeastMeanOptions& opts);
MeanEstimate least_mean(const CoefficientPair& pair, Which which, const LeastMeanOptions& opts);

struct TimeGrid {
  double start = 0.0;
  double step = 0.01;
  std::size_t count = 101;

  double at(std::size_t i) const noexcept { return start + static_cast<double>(i) * step; }
};

struct EntireLogisticOptions {
  double relax = 0.0;  ///< 0 selects 40 / a_inf
  double tol_ode = 1e-8;
};

/// The bounded positive entire solution u*(t) of u' = u(a(t) - b(t)u), tabulated.
class EntireLogistic {
 public:
  EntireLogistic(const CoefficientPair& pair, TimeGrid grid, std::vector<double> values, double relax,
                 std::optional<double> period);

  const TimeGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double relax() const noexcept { return relax_; }

  /// Cubic Hermite interpolation using the ODE slope at the nodes. Periodic tables
  /// wrap; others clamp to the end values.
  double operator()(double t) const;
  double derivative(double t) const;

 private:
  CoefficientPair pair_;
  TimeGrid grid_;
  std::vector<double> values_;
  double relax_;
  std::optional<double> period_;
};

EntireLogistic entire_logistic(const CoefficientPair& pair, const TimeGrid& t_grid,
                               const EntireLogisticOptions& opts = {});

/// u* tabulated over one period (periodic), a short constant table, or the sampled span.
EntireLogistic entire_logistic(const CoefficientPair& pair);

struct HypothesisReport {
  bool positive_bounded = false;  ///< (H)
  bool h1 = false;                ///< b_inf > chi*mu*(1 + a_sup/a_inf)
  double h1_margin = 0.0;         ///< b_inf - chi*mu*(1 + a_sup/a_inf)
};

HypothesisReport check_hypotheses(const CoefficientPair& pair, const ChemoParams& params);

}  // namespace chemofront
