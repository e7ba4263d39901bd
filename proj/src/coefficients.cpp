#include "chemofront/coefficients.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>

#include "chemofront/errors.hpp"

namespace chemofront {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double periodic_value(const PeriodicKind& p, double t) {
  double v = p.mean;
  for (const auto& term : p.terms) v += term.amplitude * std::sin(two_pi * term.frequency * t + term.phase);
  return v;
}

double periodic_antiderivative(const PeriodicKind& p, double t) {
  double v = p.mean * t;
  for (const auto& term : p.terms) {
    const double w = two_pi * term.frequency;
    v += term.amplitude / w * (std::cos(term.phase) - std::cos(w * t + term.phase));
  }
  return v;
}

void validate_kind(const CoefficientKind& kind) {
  if (const auto* c = std::get_if<ConstantKind>(&kind)) {
    if (!std::isfinite(c->value)) throw Error(ErrorKind::validation, "constant coefficient is not finite");
  } else if (const auto* p = std::get_if<PeriodicKind>(&kind)) {
    if (!(p->period > 0.0)) throw Error(ErrorKind::validation, "period must be positive");
    for (const auto& term : p->terms) {
      if (!(term.frequency > 0.0))
        throw Error(ErrorKind::validation, "sinusoid frequency must be positive");
      const double cycles = term.frequency * p->period;
      if (std::abs(cycles - std::round(cycles)) > 1e-9 * std::max(1.0, cycles))
        throw Error(ErrorKind::validation, "sinusoid frequency is not a multiple of 1/period");
    }
  } else {
    const auto& s = std::get<SampledKind>(kind);
    if (s.times.size() < 2 || s.times.size() != s.values.size())
      throw Error(ErrorKind::validation, "sampled coefficient needs >= 2 matching times and values");
    for (std::size_t i = 1; i < s.times.size(); ++i)
      if (!(s.times[i] > s.times[i - 1]))
        throw Error(ErrorKind::validation, "sampled coefficient times must increase strictly");
  }
}

// Extremes of a periodic coefficient: dense scan, then Brent polish around the best sample.
std::pair<double, double> periodic_extremes(const PeriodicKind& p) {
  if (p.terms.empty()) return {p.mean, p.mean};
  double fmax = 0.0;
  for (const auto& term : p.terms) fmax = std::max(fmax, term.frequency);
  const auto n = static_cast<std::size_t>(4096.0 * std::max(1.0, std::ceil(fmax * p.period)));
  const double h = p.period / static_cast<double>(n);
  std::size_t imin = 0, imax = 0;
  double vmin = periodic_value(p, 0.0), vmax = vmin;
  for (std::size_t i = 1; i < n; ++i) {
    const double v = periodic_value(p, h * static_cast<double>(i));
    if (v < vmin) vmin = v, imin = i;
    if (v > vmax) vmax = v, imax = i;
  }
  const auto polish = [&](std::size_t i, double sign) {
    const double t = h * static_cast<double>(i);
    auto r = boost::math::tools::brent_find_minima(
        [&](double s) { return sign * periodic_value(p, s); }, t - h, t + h, 52);
    return sign * r.second;
  };
  return {std::min(vmin, polish(imin, 1.0)), std::max(vmax, polish(imax, -1.0))};
}

// Extreme window averages over start times s in [-horizon, horizon - W] and
// window lengths W = k * window_min <= horizon.
std::pair<double, double> window_mean_extremes(const Coefficient& f, const LeastMeanOptions& o) {
  const double lattice = o.lattice > 0.0 ? o.lattice : o.window_min / 16.0;
  double lo = INFINITY, hi = -INFINITY;
  for (double w = o.window_min; w <= o.horizon * (1.0 + 1e-12); w += o.window_min) {
    const auto starts = static_cast<std::size_t>(std::floor((2.0 * o.horizon - w) / lattice + 1e-9));
    for (std::size_t k = 0; k <= starts; ++k) {
      const double s = -o.horizon + static_cast<double>(k) * lattice;
      const double mean = f.integral(s, s + w) / w;
      lo = std::min(lo, mean);
      hi = std::max(hi, mean);
    }
  }
  return {lo, hi};
}

void check_window(const Coefficient& f, const LeastMeanOptions& o) {
  if (!(o.window_min > 0.0)) throw Error(ErrorKind::invalid_window, "window_min must be positive");
  if (!(o.horizon >= 4.0 * o.window_min))
    throw Error(ErrorKind::invalid_window, "horizon must be at least 4 * window_min");
  if (auto T = f.period(); T && f.is_periodic() && o.window_min < *T * (1.0 - 1e-12))
    throw Error(ErrorKind::invalid_window, "window_min is shorter than the coefficient period");
}

}  // namespace

Coefficient::Coefficient(CoefficientKind kind) : kind_(std::move(kind)) {
  validate_kind(kind_);
  if (const auto* c = std::get_if<ConstantKind>(&kind_)) {
    inf_ = sup_ = lower_mean_ = upper_mean_ = c->value;
  } else if (const auto* p = std::get_if<PeriodicKind>(&kind_)) {
    std::tie(inf_, sup_) = periodic_extremes(*p);
    lower_mean_ = upper_mean_ = p->mean;
  } else {
    const auto& s = std::get<SampledKind>(kind_);
    cumulative_.assign(s.times.size(), 0.0);
    for (std::size_t i = 1; i < s.times.size(); ++i)
      cumulative_[i] = cumulative_[i - 1] + 0.5 * (s.values[i] + s.values[i - 1]) * (s.times[i] - s.times[i - 1]);
    inf_ = *std::min_element(s.values.begin(), s.values.end());
    sup_ = *std::max_element(s.values.begin(), s.values.end());
    const double horizon = std::max(std::abs(s.times.front()), std::abs(s.times.back()));
    const LeastMeanOptions o{horizon / 4.0, horizon, horizon / 64.0};
    std::tie(lower_mean_, upper_mean_) = window_mean_extremes(*this, o);
    means_estimated_ = true;
  }
  if (!(inf_ > 0.0) || !std::isfinite(sup_))
    throw Error(ErrorKind::hypothesis_violation, "(H) requires a positive bounded coefficient");
}

double Coefficient::operator()(double t) const {
  if (const auto* c = std::get_if<ConstantKind>(&kind_)) return c->value;
  if (const auto* p = std::get_if<PeriodicKind>(&kind_)) return periodic_value(*p, t);
  const auto& s = std::get<SampledKind>(kind_);
  if (t <= s.times.front()) return s.values.front();
  if (t >= s.times.back()) return s.values.back();
  const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
  const auto i = static_cast<std::size_t>(it - s.times.begin()) - 1;
  const double w = (t - s.times[i]) / (s.times[i + 1] - s.times[i]);
  return (1.0 - w) * s.values[i] + w * s.values[i + 1];
}

double Coefficient::antiderivative(double t) const {
  if (const auto* c = std::get_if<ConstantKind>(&kind_)) return c->value * t;
  if (const auto* p = std::get_if<PeriodicKind>(&kind_)) return periodic_antiderivative(*p, t);
  const auto& s = std::get<SampledKind>(kind_);
  if (t <= s.times.front()) return (t - s.times.front()) * s.values.front();
  if (t >= s.times.back()) return cumulative_.back() + (t - s.times.back()) * s.values.back();
  const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
  const auto i = static_cast<std::size_t>(it - s.times.begin()) - 1;
  const double ft = (*this)(t);
  return cumulative_[i] + 0.5 * (s.values[i] + ft) * (t - s.times[i]);
}

double Coefficient::integral(double t0, double t1) const { return antiderivative(t1) - antiderivative(t0); }

std::optional<double> Coefficient::period() const {
  if (const auto* p = std::get_if<PeriodicKind>(&kind_)) return p->period;
  return std::nullopt;
}

std::optional<double> CoefficientPair::common_period() const {
  const auto pa = a.period(), pb = b.period();
  if (a.is_constant() && b.is_constant()) return std::nullopt;
  if (a.is_constant() && pb) return pb;
  if (b.is_constant() && pa) return pa;
  if (pa && pb) {
    const double ratio = std::max(*pa, *pb) / std::min(*pa, *pb);
    if (std::abs(ratio - std::round(ratio)) < 1e-9 * ratio) return std::max(*pa, *pb);
  }
  return std::nullopt;
}

std::pair<double, double> eval_coeffs(const CoefficientPair& pair, double t) { return pair(t); }

MeanEstimate least_mean(const Coefficient& f, const LeastMeanOptions& opts) {
  check_window(f, opts);
  if (!f.means_estimated()) return {f.lower_mean(), false};
  return {window_mean_extremes(f, opts).first, true};
}

MeanEstimate greatest_mean(const Coefficient& f, const LeastMeanOptions& opts) {
  check_window(f, opts);
  if (!f.means_estimated()) return {f.upper_mean(), false};
  return {window_mean_extremes(f, opts).second, true};
}

MeanEstimate least_mean(const CoefficientPair& pair, Which which, const LeastMeanOptions& opts) {
  return least_mean(which == Which::a ? pair.a : pair.b, opts);
}

// ---------------------------------------------------------------------------
// Entire logistic solution

namespace {

using OdeState = std::array<double, 1>;

// Integrates u' = u(a - b u) from `from` (with u(from) = u0) and samples at `times`
// (sorted ascending, all > from).
std::vector<double> integrate_logistic(const CoefficientPair& pair, double from, double u0,
                                       const std::vector<double>& times) {
  namespace odeint = boost::numeric::odeint;
  auto rhs = [&](const OdeState& u, OdeState& du, double t) {
    const auto [a, b] = pair(t);
    du[0] = u[0] * (a - b * u[0]);
  };
  std::vector<double> stops;
  stops.reserve(times.size() + 1);
  stops.push_back(from);
  stops.insert(stops.end(), times.begin(), times.end());
  std::vector<double> out;
  out.reserve(times.size());
  OdeState u{u0};
  auto stepper = odeint::make_controlled(1e-13, 1e-12, odeint::runge_kutta_dopri5<OdeState>());
  bool first = true;
  odeint::integrate_times(stepper, rhs, u, stops.begin(), stops.end(), 1e-3,
                          [&](const OdeState& s, double) {
                            if (first) {
                              first = false;
                              return;
                            }
                            out.push_back(s[0]);
                          });
  return out;
}

}  // namespace

EntireLogistic::EntireLogistic(const CoefficientPair& pair, TimeGrid grid, std::vector<double> values,
                               double relax, std::optional<double> period)
    : pair_(pair), grid_(grid), values_(std::move(values)), relax_(relax), period_(period) {}

double EntireLogistic::operator()(double t) const {
  double s = t;
  if (period_) {
    s = std::fmod(t - grid_.start, *period_);
    if (s < 0.0) s += *period_;
    s += grid_.start;
  }
  const double last = grid_.at(grid_.count - 1);
  if (s <= grid_.start) return values_.front();
  if (s >= last) return values_.back();
  auto i = static_cast<std::size_t>((s - grid_.start) / grid_.step);
  i = std::min(i, grid_.count - 2);
  const double h = grid_.step;
  const double t0 = grid_.at(i);
  const double y0 = values_[i], y1 = values_[i + 1];
  const auto slope = [&](double tt, double y) {
    const auto [a, b] = pair_(tt);
    return y * (a - b * y);
  };
  const double m0 = slope(t0, y0), m1 = slope(t0 + h, y1);
  const double w = (s - t0) / h;
  const double w2 = w * w, w3 = w2 * w;
  return (2 * w3 - 3 * w2 + 1) * y0 + (w3 - 2 * w2 + w) * h * m0 + (-2 * w3 + 3 * w2) * y1 +
         (w3 - w2) * h * m1;
}

double EntireLogistic::derivative(double t) const {
  const double u = (*this)(t);
  const auto [a, b] = pair_(t);
  return u * (a - b * u);
}

EntireLogistic entire_logistic(const CoefficientPair& pair, const TimeGrid& t_grid,
                               const EntireLogisticOptions& opts) {
  if (t_grid.count < 2 || !(t_grid.step > 0.0))
    throw Error(ErrorKind::validation, "time grid needs >= 2 points and a positive step");
  double relax = opts.relax > 0.0 ? opts.relax : 40.0 / pair.a.inf();
  const double u0 = pair.a.sup() / pair.b.inf();
  std::vector<double> times(t_grid.count);
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = t_grid.at(i);
  const auto period = pair.common_period();

  for (int attempt = 0; attempt < 3; ++attempt, relax *= 2.0) {
    auto values = integrate_logistic(pair, t_grid.start - relax, u0, times);
    if (!period) return EntireLogistic(pair, t_grid, std::move(values), relax, std::nullopt);
    std::vector<double> shifted(times);
    for (double& t : shifted) t += *period;
    const auto later = integrate_logistic(pair, t_grid.start - relax, u0, shifted);
    double defect = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) defect = std::max(defect, std::abs(later[i] - values[i]));
    if (defect < opts.tol_ode) return EntireLogistic(pair, t_grid, std::move(values), relax, std::nullopt);
  }
  throw Error(ErrorKind::relaxation_failure, "entire logistic solution failed the periodicity check");
}

EntireLogistic entire_logistic(const CoefficientPair& pair) {
  if (const auto period = pair.common_period()) {
    TimeGrid g{0.0, *period / 1024.0, 1025};
    auto table = entire_logistic(pair, g);
    return EntireLogistic(pair, g, table.values(), table.relax(), period);
  }
  if (pair.is_constant()) return entire_logistic(pair, TimeGrid{0.0, 1.0, 16});
  double lo = INFINITY, hi = -INFINITY;
  for (const auto* c : {&pair.a, &pair.b}) {
    if (const auto* s = std::get_if<SampledKind>(&c->kind())) {
      lo = std::min(lo, s->times.front());
      hi = std::max(hi, s->times.back());
    }
  }
  const std::size_t count = 4097;
  return entire_logistic(pair, TimeGrid{lo, (hi - lo) / static_cast<double>(count - 1), count});
}

HypothesisReport check_hypotheses(const CoefficientPair& pair, const ChemoParams& params) {
  HypothesisReport r;
  r.positive_bounded = pair.a.inf() > 0.0 && pair.b.inf() > 0.0 && std::isfinite(pair.a.sup()) &&
                       std::isfinite(pair.b.sup());
  r.h1_margin = pair.b.inf() - params.chi_mu() * (1.0 + pair.a.sup() / pair.a.inf());
  r.h1 = r.positive_bounded && r.h1_margin > 0.0;
  return r;
}

}  // namespace chemofront
