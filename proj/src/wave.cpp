#include "chemofront/wave.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "chemofront/roots.hpp"

namespace chemofront {

namespace {

std::optional<double> wave_period(const FrontFamily& family) {
  if (family.pair().is_constant()) return std::nullopt;
  return family.pair().common_period();
}

std::size_t slice_count(const std::optional<double>& period, const WaveOptions& opts) {
  return period ? opts.slices : 1;
}

double slice_time(const std::optional<double>& period, const WaveOptions& opts, std::size_t k) {
  return period ? *period * static_cast<double>(k) / static_cast<double>(opts.slices) : 0.0;
}

void validate_options(const FrontFamily& family, const WaveOptions& opts) {
  if (!(opts.dx > 0.0) || !(opts.dt > 0.0)) throw Error(ErrorKind::validation, "dx and dt must be positive");
  if (!(opts.tol_wave > 0.0) || opts.tol_inner < 0.0) throw Error(ErrorKind::validation, "tolerances must be positive");
  if (!(opts.x_end - opts.x0 >= 40.0 / family.kappa()))
    throw Error(ErrorKind::validation, "grid must span at least 40/kappa for a wave construction");
  if (!(opts.back_window > 0.0)) throw Error(ErrorKind::validation, "back window must be positive");
  if (opts.slices < 2) throw Error(ErrorKind::validation, "need at least two slices per period");
  if (!family.pair().is_constant() && !family.pair().common_period())
    throw Error(ErrorKind::validation, "waves need constant or periodic coefficients");
}

double tol_inner(const WaveOptions& opts) { return opts.tol_inner > 0.0 ? opts.tol_inner : opts.tol_wave / 10.0; }

RightBoundary right_boundary(const FrontFamily& family, double amplitude) {
  return {RightBoundary::Kind::dirichlet_exponential, amplitude, family.kappa()};
}

// The IMEX step residual at a slice: implicit diffusion at t, explicit terms at t - dt.
double step_residual(const GridProfile& u, const GridProfile& prev, double t_prev, double dt, const PsiField& field,
                     const FrontFamily& family) {
  const auto& p = family.params();
  const auto [a, b] = family.pair()(t_prev);
  const double c = family.speed(t_prev);
  const double h = u.dx;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    const double d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
    const double d1 = (prev[i + 1] - prev[i - 1]) / (2.0 * h);
    const double reaction = a - p.chi * p.lambda * field.psi[i] - (b - p.chi_mu()) * prev[i];
    const double r = (u[i] - prev[i]) / dt - d2 - (c - p.chi * field.dpsi[i]) * d1 - reaction * prev[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

// Decay rate of exp(-k x) solving the discrete linear tail equation
// D2 u + c D1 u + a u = 0 with period-mean coefficients; kappa + O(dx^2).
double discrete_tail_rate(const FrontFamily& family, double dx) {
  const double k = family.kappa(), a = family.pair().a.lower_mean(), c = (a + k * k) / k;
  const auto f = [&](double r) { return (2.0 * std::cosh(r * dx) - 2.0) / (dx * dx) - c * std::sinh(r * dx) / dx + a; };
  return bisect_root(f, 0.5 * k, 0.5 * (k + a / k), 0.0);
}

double max_distance(const std::vector<GridProfile>& a, const std::vector<GridProfile>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, sup_distance(a[k], b[k]));
  return m;
}

}  // namespace

GridProfile WaveSolution::at(double t) const {
  if (!period || profiles.size() == 1) return profiles.front();
  const auto m = static_cast<double>(profiles.size());
  double s = std::fmod(t / *period, 1.0);
  if (s < 0.0) s += 1.0;
  s *= m;
  const auto i = std::min(static_cast<std::size_t>(s), profiles.size() - 1);
  const std::size_t j = (i + 1) % profiles.size();
  const double w = s - static_cast<double>(i);
  GridProfile out = profiles[i];
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = (1.0 - w) * profiles[i][n] + w * profiles[j][n];
  return out;
}

ImexStepper make_stepper(const FrontFamily& family) {
  return ImexStepper(family.pair(), family.params(), entire_logistic(family.pair()), family.kappa());
}

double wave_dt(const FrontFamily& family, const WaveOptions& opts) {
  const auto period = wave_period(family);
  if (!period) return opts.dt;
  const double per_slice = *period / static_cast<double>(opts.slices);
  const double m = std::ceil(per_slice / opts.dt - 1e-9);
  return per_slice / m;
}

PsiSchedule psi_schedule(const std::vector<GridProfile>& profiles, const FrontFamily& family,
                         std::optional<double> period) {
  const auto& p = family.params();
  const GreenConvolver conv(profiles.front().dx, p.lambda, p.mu);
  std::vector<PsiField> fields;
  fields.reserve(profiles.size());
  for (const auto& u : profiles) fields.push_back(conv(u, matched_tails(u, family.kappa())));
  if (fields.size() == 1) return PsiSchedule(std::move(fields.front()));
  return PsiSchedule(std::move(fields), period.value());
}

InnerLimit inner_limit(const PsiSchedule& phi, const FrontFamily& family, const WaveOptions& opts,
                       double right_amplitude) {
  const auto stepper = make_stepper(family);
  const auto period = wave_period(family);
  const double dt = wave_dt(family, opts);
  const double tol = tol_inner(opts);

  SolverState s;
  s.u = family.sample_plus(uniform_grid(opts.x0, opts.x_end, opts.dx));
  s.dt = dt;
  s.frame = Frame::moving;
  s.right = right_boundary(family, right_amplitude);

  InnerLimit out;
  PsiField field;
  GridProfile prev = s.u;
  auto step = [&] {
    prev = s.u;
    phi.at(s.t, field);
    stepper.step_moving(s, field);
  };

  if (!period) {
    // Steady state: run until the discrete time derivative drops below tol.
    const double horizon = opts.back_window * std::pow(2.0, static_cast<double>(opts.max_doublings));
    double window = opts.back_window;
    while (true) {
      step();
      const double rate = sup_distance(s.u, prev) / dt;
      if (rate < tol) {
        out.last_change = rate;
        break;
      }
      if (s.t > window) {
        window *= 2.0;
        ++out.doublings;
      }
      if (s.t > horizon)
        throw Error(ErrorKind::back_window, "no steady state within back window " + std::to_string(horizon) +
                                                " (time derivative " + std::to_string(rate) + ")");
    }
    out.window = s.t;
    out.slices = {s.u};
    out.before = {prev};
    out.clips = s.clips;
    return out;
  }

  const double T = *period;
  const auto per_slice = static_cast<std::size_t>(std::llround(T / static_cast<double>(opts.slices) / dt));
  const auto per_period = per_slice * opts.slices;
  auto record_period = [&](std::vector<GridProfile>& slices, std::vector<GridProfile>& before) {
    slices.assign(opts.slices, GridProfile{});
    before.assign(opts.slices, GridProfile{});
    for (std::size_t k = 0; k < opts.slices; ++k) {
      slices[k] = s.u;
      before[k] = prev;
      for (std::size_t j = 0; j < per_slice; ++j) step();
    }
  };
  const auto periods = static_cast<std::size_t>(std::ceil(opts.back_window / T - 1e-9));
  double window = static_cast<double>(periods) * T;
  std::size_t elapsed = 0;  // in periods
  auto run_to = [&](std::size_t target) {
    for (; elapsed < target; ++elapsed)
      for (std::size_t j = 0; j < per_period; ++j) step();
  };
  run_to(periods);
  std::vector<GridProfile> slices, before;
  record_period(slices, before);
  ++elapsed;
  while (true) {
    const auto target = 2 * static_cast<std::size_t>(std::llround(window / T));
    run_to(target);
    std::vector<GridProfile> next, next_before;
    record_period(next, next_before);
    ++elapsed;
    window *= 2.0;
    ++out.doublings;
    const double change = max_distance(next, slices);
    slices = std::move(next);
    before = std::move(next_before);
    out.last_change = change;
    if (change < tol) break;
    if (out.doublings >= opts.max_doublings)
      throw Error(ErrorKind::back_window, "inner limit not converged after " + std::to_string(out.doublings) +
                                              " doublings (change " + std::to_string(change) + ")");
  }
  out.window = window;
  out.slices = std::move(slices);
  out.before = std::move(before);
  out.clips = s.clips;
  return out;
}

Asymptotics check_asymptotics(const WaveSolution& wave, const EntireLogistic& u_star) {
  Asymptotics a;
  const auto& first = wave.profiles.front();
  a.x_left = first.x0 + 5.0;
  a.x_right = first.x_end() - 10.0;
  const auto il = static_cast<std::size_t>(std::llround((a.x_left - first.x0) / first.dx));
  const auto ir = static_cast<std::size_t>(std::llround((a.x_right - first.x0) / first.dx));
  for (std::size_t k = 0; k < wave.profiles.size(); ++k) {
    const auto& u = wave.profiles[k];
    a.left_defect = std::max(a.left_defect, std::abs(u[il] - u_star(wave.times[k])));
    a.right_defect = std::max(a.right_defect, std::abs(u[ir] * std::exp(wave.kappa * u.x(ir)) - 1.0));
  }
  return a;
}

WaveSolution fixed_point(const FrontFamily& family, const WaveOptions& opts, const std::vector<GridProfile>* seed) {
  validate_options(family, opts);
  const auto period = wave_period(family);
  const std::size_t n = slice_count(period, opts);
  const auto grid = uniform_grid(opts.x0, opts.x_end, opts.dx);
  const double slack = 10.0 * opts.dx * opts.dx;

  std::vector<double> times(n);
  for (std::size_t k = 0; k < n; ++k) times[k] = slice_time(period, opts, k);
  std::vector<GridProfile> plus_envelope(1, family.sample_plus(grid)), minus_envelope(n);
  for (std::size_t k = 0; k < n; ++k) minus_envelope[k] = family.sample_minus(grid, times[k]);

  std::vector<GridProfile> current = seed ? *seed : std::vector<GridProfile>(n, plus_envelope.front());
  if (current.size() != n) throw Error(ErrorKind::shape, "seed must hold one profile per slice");

  WaveSolution w;
  w.kappa = family.kappa();
  w.period = period;
  w.dt = wave_dt(family, opts);
  w.times = times;

  // The right boundary amplitude is refitted from U(x_end - 5) along the scheme's own tail rate.
  const double x_fit = opts.x_end - 5.0;
  const double rate_h = discrete_tail_rate(family, opts.dx);
  double amplitude = 1.0;
  InnerLimit inner;
  for (std::size_t iter = 1;; ++iter) {
    const auto sched = psi_schedule(current, family, period);
    inner = inner_limit(sched, family, opts, amplitude);

    double margin = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = inner.slices[k][i];
        margin = std::max({margin, minus_envelope[k][i] - u, u - plus_envelope.front()[i]});
      }
    if (margin > slack)
      throw Error(ErrorKind::set_escape, "iterate left the envelope set by " + std::to_string(margin));
    w.sandwich_margin = margin;

    const double change = max_distance(inner.slices, current);
    current = inner.slices;
    double fit = 0.0;
    for (const auto& u : current)
      fit += u.interpolate(x_fit) * std::exp(rate_h * x_fit + (family.kappa() - rate_h) * opts.x_end);
    amplitude = fit / static_cast<double>(n);
    w.outer_iterations = iter;
    w.last_change = change;
    if (family.params().chi == 0.0 || change < opts.tol_wave) break;
    if (iter >= opts.max_outer)
      throw Error(ErrorKind::fixed_point_stall, "outer iteration stalled at change " + std::to_string(change));
  }
  w.right_amplitude = amplitude;

  // Assemble with psi from the wave itself.
  const auto sched = psi_schedule(current, family, period);
  w.psi = sched.slices();
  PsiField field;
  for (std::size_t k = 0; k < n; ++k) {
    sched.at(times[k] - w.dt, field);
    w.residual_linf = std::max(w.residual_linf,
                               step_residual(current[k], inner.before[k], times[k] - w.dt, w.dt, field, family));
  }

  // One more period (one time unit when steady) from the converged slice 0.
  {
    const auto stepper = make_stepper(family);
    SolverState s;
    s.u = current.front();
    s.dt = w.dt;
    s.frame = Frame::moving;
    s.right = right_boundary(family, amplitude);
    const double T = period.value_or(1.0);
    const auto per_slice = static_cast<std::size_t>(std::llround(T / static_cast<double>(period ? opts.slices : 1) / w.dt));
    for (std::size_t k = 1; k <= (period ? opts.slices : 1); ++k) {
      for (std::size_t j = 0; j < per_slice; ++j) {
        sched.at(s.t, field);
        stepper.step_moving(s, field);
      }
      w.periodicity_defect = std::max(w.periodicity_defect, sup_distance(s.u, current[k % n]));
    }
  }

  w.profiles = std::move(current);
  inner.slices.clear();
  inner.before.clear();
  w.inner = std::move(inner);
  const auto u_star = entire_logistic(family.pair());
  w.asymptotics = check_asymptotics(w, u_star);
  if (const auto x = rightmost_crossing(w.profiles.front(), 0.5 * u_star(0.0))) w.half_level_x = *x;

  if (opts.uniqueness_check && !seed) {
    WaveOptions again = opts;
    again.uniqueness_check = false;
    const auto other = fixed_point(family, again, &minus_envelope);
    w.seed_distance = max_distance(other.profiles, w.profiles);
    if (*w.seed_distance > 10.0 * opts.tol_wave)
      w.warnings.push_back("waves grown from phi_plus and phi_minus differ by " + std::to_string(*w.seed_distance));
  }
  return w;
}

WaveSolution constant_wave(const FrontFamily& family, const WaveOptions& opts) {
  if (!family.pair().is_constant()) throw Error(ErrorKind::validation, "constant_wave needs constant coefficients");
  return fixed_point(family, opts);
}

}  // namespace chemofront
