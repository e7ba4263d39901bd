#include "chemofront/speed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chemofront {

SpeedEstimate track_level(const std::vector<Snapshot>& history, const EntireLogistic& u_star,
                          const TrackOptions& opts) {
  if (!(opts.theta > 0.0 && opts.theta < 1.0)) throw Error(ErrorKind::validation, "theta must lie in (0, 1)");
  if (!(opts.window_min > 0.0)) throw Error(ErrorKind::invalid_window, "window_min must be positive");
  SpeedEstimate est;
  est.theta = opts.theta;
  for (const auto& snap : history) {
    if (snap.t < opts.burn_in - 1e-12) continue;
    const auto x = rightmost_crossing(snap.u, opts.theta * u_star(snap.t));
    if (!x) throw Error(ErrorKind::tracking_loss, "no level crossing at t = " + std::to_string(snap.t));
    est.times.push_back(snap.t);
    est.crossings.push_back(*x);
  }
  const std::size_t n = est.times.size();
  if (n < 2 || !(est.times.back() - est.times.front() >= opts.window_min - 1e-9))
    throw Error(ErrorKind::invalid_window, "history after burn-in is shorter than one window");

  const double tol = 1e-9 * opts.window_min;
  est.least_mean_speed = std::numeric_limits<double>::infinity();
  est.window_speeds.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::size_t back = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double w = est.times[j] - est.times[i];
      if (w < opts.window_min - tol) break;
      est.least_mean_speed = std::min(est.least_mean_speed, (est.crossings[j] - est.crossings[i]) / w);
    }
    while (back + 1 < j && est.times[j] - est.times[back + 1] >= opts.window_min - tol) ++back;
    if (est.times[j] - est.times[back] >= opts.window_min - tol)
      est.window_speeds[j] = (est.crossings[j] - est.crossings[back]) / (est.times[j] - est.times[back]);
  }

  double tm = 0.0, xm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tm += est.times[i];
    xm += est.crossings[i];
  }
  tm /= static_cast<double>(n);
  xm /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (est.times[i] - tm) * (est.crossings[i] - xm);
    sxx += (est.times[i] - tm) * (est.times[i] - tm);
  }
  est.mean_speed = sxy / sxx;
  for (std::size_t i = 0; i < n; ++i)
    est.fit_residual = std::max(est.fit_residual, std::abs(est.crossings[i] - xm - est.mean_speed * (est.times[i] - tm)));
  return est;
}

SpreadingResult spreading_experiment(const CoefficientPair& pair, const ChemoParams& params,
                                     const SpreadingOptions& opts) {
  const auto report = check_hypotheses(pair, params);
  if (!report.h1) throw Error(ErrorKind::hypothesis_violation, "(H1) fails: b_inf <= chi mu (1 + a_sup/a_inf)");
  const auto u_star = entire_logistic(pair);
  const double abar = pair.a.lower_mean();
  const double decay = opts.decay > 0.0 ? opts.decay : std::sqrt(abar);
  const ImexStepper stepper(pair, params, u_star);

  SolverState s;
  s.frame = Frame::lab;
  s.dt = opts.dt;
  s.right.kind = RightBoundary::Kind::dirichlet_zero;
  const double u0 = u_star(0.0);
  s.u = sample(uniform_grid(opts.x0, opts.x_end, opts.dx), [&](double x) { return x < 0.0 ? u0 : u0 * std::exp(-decay * x); });
  s.u.values.back() = 0.0;

  SpreadingResult out;
  std::vector<Snapshot> history;
  stepper.evolve(s, opts.t_end, nullptr, [&](const SolverState& st) {
    history.push_back({st.t, st.u});
    out.max_u = std::max(out.max_u, sup_norm(st.u.view()));
  }, opts.record_every);
  out.clips = s.clips;
  out.estimate = track_level(history, u_star, opts.track);
  out.lower_bound = 2.0 * std::sqrt(abar);
  out.pass = out.estimate.least_mean_speed >= 0.95 * out.lower_bound;
  return out;
}

SpeedAudit wave_speed_audit(const WaveSolution& wave, const FrontFamily& family, double t_end, double record_every) {
  const auto u_star = entire_logistic(family.pair());
  const auto& ref = wave.profiles.front();
  const double c_end = family.speed_fn().displacement(t_end);
  const auto lab = uniform_grid(ref.x0, ref.x_end() + c_end, ref.dx);

  std::vector<Snapshot> history;
  const auto frames = static_cast<std::size_t>(std::llround(t_end / record_every));
  for (std::size_t k = 0; k <= frames; ++k) {
    const double t = record_every * static_cast<double>(k);
    const double shift = family.speed_fn().displacement(t);
    const auto profile = wave.at(t);
    history.push_back({t, sample(lab, [&](double x) {
                         const double y = x - shift;
                         return y < profile.x0 ? profile.values.front() : (y > profile.x_end() ? 0.0 : profile.interpolate(y));
                       })});
  }
  SpeedAudit audit;
  audit.estimate = track_level(history, u_star, {0.5, 0.0, 5.0});
  const double k = family.kappa();
  audit.expected_mean = (family.pair().a.lower_mean() + k * k) / k;
  const auto& est = audit.estimate;
  for (std::size_t i = 0; i < est.times.size(); ++i)
    audit.max_deviation = std::max(
        audit.max_deviation, std::abs(est.crossings[i] - est.crossings[0] - family.speed_fn().displacement(est.times[i])));
  audit.relative_speed_error = std::abs(est.least_mean_speed / audit.expected_mean - 1.0);

  const double T = wave.period.value_or(1.0);
  const auto per = static_cast<std::size_t>(std::llround(T / record_every));
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + per < est.times.size(); i += per) {
    sum += est.crossings[i + per] - est.crossings[i];
    ++count;
  }
  audit.period_displacement = count ? sum / static_cast<double>(count) : 0.0;
  audit.expected_period_displacement = family.speed_fn().displacement(T);
  return audit;
}

}  // namespace chemofront
