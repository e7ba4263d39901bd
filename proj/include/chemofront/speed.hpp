#pragma once

#include <vector>

#include "chemofront/wave.hpp"

namespace chemofront {

struct Snapshot {
  double t = 0.0;
  GridProfile u;
};

struct TrackOptions {
  double theta = 0.5;
  double burn_in = 5.0;
  double window_min = 5.0;
};

struct SpeedEstimate {
  double theta = 0.5;
  std::vector<double> times;      ///< after burn-in
  std::vector<double> crossings;  ///< rightmost x with u = theta u*(t)
  std::vector<double> window_speeds;  ///< over the trailing window_min (NaN before one window has passed)
  double least_mean_speed = 0.0;  ///< min over windows of length >= window_min
  double mean_speed = 0.0;        ///< least-squares slope
  double fit_residual = 0.0;      ///< sup deviation from the least-squares line
};

SpeedEstimate track_level(const std::vector<Snapshot>& history, const EntireLogistic& u_star,
                          const TrackOptions& opts = {});

struct SpreadingOptions {
  double x0 = -60.0;
  double x_end = 140.0;
  double dx = 0.05;
  double dt = 0.005;
  double t_end = 40.0;
  double record_every = 0.1;
  double decay = 0.0;  ///< u0 = u*(0) e^{-decay x} for x > 0; 0 selects sqrt(abar)
  TrackOptions track;
};

struct SpreadingResult {
  SpeedEstimate estimate;
  double lower_bound = 0.0;  ///< 2 sqrt(abar)
  bool pass = false;         ///< least mean speed >= 0.95 * lower bound
  double max_u = 0.0;
  std::size_t clips = 0;
};

SpreadingResult spreading_experiment(const CoefficientPair& pair, const ChemoParams& params,
                                     const SpreadingOptions& opts = {});

struct SpeedAudit {
  SpeedEstimate estimate;
  double expected_mean = 0.0;        ///< (abar + kappa^2) / kappa
  double max_deviation = 0.0;        ///< sup_t |x(t) - x(0) - C(t)|
  double relative_speed_error = 0.0; ///< |least mean speed / expected - 1|
  double period_displacement = 0.0;  ///< mean x(t + T) - x(t) over whole periods (T = 1 when steady)
  double expected_period_displacement = 0.0;
};

/// Rebuilds u(x, t) = U(x - C(t), t) on a lab grid for t in [0, t_end] and tracks the half level.
SpeedAudit wave_speed_audit(const WaveSolution& wave, const FrontFamily& family, double t_end = 20.0,
                            double record_every = 0.05);

}  // namespace chemofront
