#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chemofront/front_family.hpp"
#include "chemofront/parabolic.hpp"

namespace chemofront {

struct WaveOptions {
  double x0 = -60.0;
  double x_end = 60.0;
  double dx = 0.05;
  double dt = 0.005;  ///< periodic runs shrink it so that slices land on steps
  double tol_wave = 1e-4;
  double tol_inner = 0.0;  ///< 0 selects tol_wave / 10
  std::size_t max_outer = 50;
  double back_window = 20.0;  ///< initial back window (rounded up to whole periods)
  std::size_t max_doublings = 4;
  std::size_t slices = 64;  ///< per period
  bool uniqueness_check = true;
};

/// Result of the inner monotone limit for a frozen phi.
struct InnerLimit {
  std::vector<GridProfile> slices;  ///< U at t_k = k T / slices (one profile when steady)
  std::vector<GridProfile> before;  ///< U one step before each slice
  double window = 0.0;              ///< back window at which the limit was accepted
  std::size_t doublings = 0;
  double last_change = 0.0;         ///< sup change at acceptance
  std::size_t clips = 0;
};

struct Asymptotics {
  double x_left = 0.0;
  double x_right = 0.0;
  double left_defect = 0.0;   ///< sup_t |U(x_left, t) - u*(t)|
  double right_defect = 0.0;  ///< sup_t |U(x_right, t) e^{kappa x_right} - 1|
};

struct WaveSolution {
  double kappa = 0.0;
  std::optional<double> period;  ///< empty for constant coefficients
  double dt = 0.0;
  std::vector<double> times;  ///< slice times in [0, T)
  std::vector<GridProfile> profiles;
  std::vector<PsiField> psi;
  double residual_linf = 0.0;
  double periodicity_defect = 0.0;
  double sandwich_margin = 0.0;  ///< most adverse envelope violation, negative when inside
  std::size_t outer_iterations = 0;
  double last_change = 0.0;
  double right_amplitude = 1.0;
  InnerLimit inner;  ///< statistics of the final inner solve (profiles moved out)
  Asymptotics asymptotics;
  double half_level_x = 0.0;  ///< rightmost x with U(x, 0) = u*(0) / 2
  std::optional<double> seed_distance;  ///< sup distance to the wave grown from the phi_minus seed
  std::vector<std::string> warnings;

  /// Frame displacement C(t) = integral of c_kappa over [0, t].
  double displacement(double t, const FrontFamily& family) const { return family.speed_fn().displacement(t); }
  /// Profile at time t, linearly interpolated between slices (periodic) or the steady profile.
  GridProfile at(double t) const;
};

/// Moving-frame stepper for a family, with u*(t) tabulated for the left boundary.
ImexStepper make_stepper(const FrontFamily& family);

/// psi slices of candidate profiles (one per slice time).
PsiSchedule psi_schedule(const std::vector<GridProfile>& profiles, const FrontFamily& family,
                         std::optional<double> period);

/// Limit as t0 -> -inf of the evolution from phi_plus at t0 with psi frozen to `phi`.
InnerLimit inner_limit(const PsiSchedule& phi, const FrontFamily& family, const WaveOptions& opts,
                       double right_amplitude = 1.0);

/// Picard iteration phi -> inner_limit(phi) from phi_plus (or from `seed`).
WaveSolution fixed_point(const FrontFamily& family, const WaveOptions& opts,
                         const std::vector<GridProfile>* seed = nullptr);

/// fixed_point for constant coefficients (steady profile).
WaveSolution constant_wave(const FrontFamily& family, const WaveOptions& opts);

Asymptotics check_asymptotics(const WaveSolution& wave, const EntireLogistic& u_star);

/// Effective step and slice geometry used for a family and options.
double wave_dt(const FrontFamily& family, const WaveOptions& opts);

}  // namespace chemofront
