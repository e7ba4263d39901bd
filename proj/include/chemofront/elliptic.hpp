#pragma once

#include <array>

#include "chemofront/grid.hpp"
#include "chemofront/params.hpp"

namespace chemofront {

/// Behaviour of a profile beyond one end of its grid.
struct TailSide {
  enum class Kind { zero, constant, exponential };
  Kind kind = Kind::zero;
  double amplitude = 0.0;  ///< constant value, or amplitude of amplitude * exp(-rate x)
  double rate = 0.0;

  static TailSide zero() { return {}; }
  static TailSide constant(double value) { return {Kind::constant, value, 0.0}; }
  static TailSide exponential(double amplitude, double rate) { return {Kind::exponential, amplitude, rate}; }

  double value(double x) const;
};

struct TailSpec {
  TailSide left;
  TailSide right;
};

/// Tails matching a profile exactly at its ends: constant on the left, amplitude*exp(-rate x)
/// on the right (or zero when rate is not positive).
TailSpec matched_tails(const GridProfile& u, double right_rate);

/// psi and its x-derivative on the grid of the source profile.
struct PsiField {
  GridProfile psi;
  GridProfile dpsi;
};

/// Whole-line solver of 0 = v'' - lambda v + mu u by convolution with
/// mu/(2 sqrt(lambda)) exp(-sqrt(lambda)|x|). Two exponential sweeps, with u
/// interpolated by local cubics that are integrated exactly against the kernel.
class GreenConvolver {
 public:
  GreenConvolver(double dx, double lambda, double mu);

  PsiField operator()(const GridProfile& u, const TailSpec& tails) const;
  void apply(const GridProfile& u, const TailSpec& tails, PsiField& out) const;

  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }
  double dx() const noexcept { return dx_; }

 private:
  // Weights of a cell integral over the four stencil nodes; [left|right sweep][stencil].
  using Stencil = std::array<double, 4>;
  double dx_, lambda_, mu_, root_, decay_;
  std::array<std::array<Stencil, 3>, 2> weights_{};
};

PsiField green_convolve(const GridProfile& u, const TailSpec& tails, double lambda, double mu);

/// Throws tail_mismatch when a tail disagrees with the profile end by more than 5%.
void check_tails(const GridProfile& u, const TailSpec& tails);

struct PsiBoundReport {
  double psi_nonneg_margin = 0.0;  ///< min psi + slack
  double psi_upper_margin = 0.0;   ///< min (upper bound + slack - psi)
  double dpsi_margin = 0.0;        ///< min (gradient bound + slack - |dpsi|)
  std::size_t violations = 0;
  bool ok() const noexcept { return violations == 0; }
};

/// Pointwise checks 0 <= psi <= min{mu a_sup/(lambda (b_inf - chi mu)), mu/(lambda-kappa^2) e^{-kappa x}}
/// and |dpsi| <= mu (sqrt(lambda-kappa^2)+kappa)/(lambda-kappa^2) e^{-kappa x}, slack 10 dx^2.
PsiBoundReport verify_psi_bounds(const PsiField& field, double kappa, const ChemoParams& params, double a_sup,
                                 double b_inf);

}  // namespace chemofront
