#include "chemofront/front_family.hpp"

#include <algorithm>
#include <cmath>

#include "chemofront/roots.hpp"

namespace chemofront {

double phi_kappa(double x, double kappa) { return std::exp(-kappa * x); }

FrontFamily::FrontFamily(CoefficientPair pair, ChemoParams params, FrontParams front)
    : pair_(std::move(pair)), params_(params), front_(std::move(front)), speed_(pair_, front_.kappa) {
  if (!(pair_.b.inf() > params_.chi_mu()))
    throw Error(ErrorKind::hypothesis_violation, "b_inf must exceed chi*mu");
}

FrontFamily FrontFamily::build(const CoefficientPair& pair, const ChemoParams& params, double kappa) {
  return FrontFamily(pair, params, front_constants(pair, params, kappa));
}

double FrontFamily::phi_plus(double x) const { return std::min(phi_kappa(x, front_.kappa), front_.plateau); }

double FrontFamily::phi_lower(double x, double t) const {
  const double k = front_.kappa, e = front_.epsilon;
  return std::exp(-k * x) - front_.d * std::exp(front_.A(t) - (k + e) * x);
}

double FrontFamily::phi_lower_dt(double x, double t) const {
  const double k = front_.kappa, e = front_.epsilon;
  return -front_.d * front_.A.derivative(t) * std::exp(front_.A(t) - (k + e) * x);
}

TurningPoints FrontFamily::turning_points(double t) const {
  const double k = front_.kappa, e = front_.epsilon, a = front_.A(t);
  TurningPoints tp;
  tp.x_minus = (std::log(front_.d) + a) / e;
  tp.x_plus = (std::log((k + e) / k * front_.d) + a) / e;
  tp.peak = e / (k + e) * std::exp(-k * tp.x_plus);
  tp.peak_bound = e / k * std::exp(a - (k + e) * tp.x_plus);
  return tp;
}

double FrontFamily::junction(double t) const {
  const auto tp = turning_points(t);
  const double delta = front_.delta0;
  if (!(delta < tp.peak)) throw Error(ErrorKind::junction_not_found, "delta0 is not below the lower profile's peak");
  return bisect_root([&](double x) { return phi_lower(x, t) - delta; }, tp.x_minus, tp.x_plus);
}

double FrontFamily::phi_minus(double x, double t) const {
  return x <= junction(t) ? front_.delta0 : phi_lower(x, t);
}

GridProfile FrontFamily::sample_plus(const GridProfile& grid) const {
  return sample(grid, [&](double x) { return phi_plus(x); });
}

GridProfile FrontFamily::sample_minus(const GridProfile& grid, double t) const {
  const double xj = junction(t);
  return sample(grid, [&](double x) { return x <= xj ? front_.delta0 : phi_lower(x, t); });
}

GridProfile residual_L(const GridProfile& u, const GridProfile& dudt, double t, const PsiField& field,
                       const FrontFamily& family) {
  require_same_grid(u, dudt, "residual_L");
  require_same_grid(u, field.psi, "residual_L");
  const auto& p = family.params();
  const auto [a, b] = family.pair()(t);
  const double c = family.speed(t);
  const double h = u.dx;
  GridProfile r = u.like();
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    const double d1 = (u[i + 1] - u[i - 1]) / (2.0 * h);
    const double d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
    const double reaction = a - p.chi * p.lambda * field.psi[i] - (b - p.chi_mu()) * u[i];
    r[i] = dudt[i] - d2 - (c - p.chi * field.dpsi[i]) * d1 - reaction * u[i];
  }
  return r;
}

GridProfile residual_L(const GridProfile& u, const GridProfile& u_prev, double h, double t,
                       const PsiField& field, const FrontFamily& family) {
  require_same_grid(u, u_prev, "residual_L");
  if (!(h > 0.0)) throw Error(ErrorKind::domain, "time step of the backward difference must be positive");
  GridProfile dudt = u.like();
  for (std::size_t i = 0; i < u.size(); ++i) dudt[i] = (u[i] - u_prev[i]) / h;
  return residual_L(u, dudt, t, field, family);
}

GridProfile random_admissible_phi(const GridProfile& grid, const FrontFamily& family, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Mode {
    double amplitude, omega, phase;
  };
  std::vector<Mode> modes(8);
  for (std::size_t k = 0; k < modes.size(); ++k)
    modes[k] = {(unit(rng) - 0.5) / static_cast<double>(k + 1), 0.05 + 2.0 * unit(rng), 6.283185307179586 * unit(rng)};
  const double offset = 0.2 + 0.6 * unit(rng);
  return sample(grid, [&](double x) {
    double s = offset;
    for (const auto& m : modes) s += m.amplitude * std::sin(m.omega * x + m.phase);
    return family.phi_plus(x) * std::clamp(s, 0.0, 1.0);
  });
}

namespace {

void record_super(EnvelopeCheck& c, const GridProfile& r, double slack) {
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    c.worst = std::min(c.worst, r[i]);
    if (r[i] < -slack) ++c.violations;
  }
}

void record_sub(EnvelopeCheck& c, const GridProfile& r, double slack, std::size_t first) {
  for (std::size_t i = std::max<std::size_t>(first, 1); i + 1 < r.size(); ++i) {
    c.worst = std::max(c.worst, r[i]);
    if (r[i] > slack) ++c.violations;
  }
}

}  // namespace

EnvelopeSuite verify_envelopes(const FrontFamily& family, const GridProfile& grid, std::size_t n_random,
                               std::uint64_t seed, const std::vector<double>& times) {
  const auto& p = family.params();
  const auto& fp = family.front();
  EnvelopeSuite suite;
  suite.slack = 10.0 * grid.dx * grid.dx;
  suite.times = times;
  suite.phi_kappa.worst = suite.plateau.worst = std::numeric_limits<double>::infinity();
  suite.lower.worst = suite.constant.worst = -std::numeric_limits<double>::infinity();
  // The constant sub-solution needs a - chi lambda psi - (b - chi mu) delta >= 0 with psi at its
  // plateau bound; this caps delta at a_inf times delta_cap, which is below delta_cap when a_inf < 1.
  const double cap = fp.delta_cap * std::min(1.0, family.pair().a.inf());
  suite.deltas = {fp.delta0, 0.25 * cap, 0.5 * cap, cap};

  std::mt19937_64 rng(seed);
  std::vector<GridProfile> phis;
  phis.push_back(family.sample_plus(grid));
  phis.push_back(grid.like(0.0));
  for (std::size_t k = 0; k < n_random; ++k) phis.push_back(random_admissible_phi(grid, family, rng));
  suite.fields = phis.size();

  const GreenConvolver conv(grid.dx, p.lambda, p.mu);
  const auto u_kappa = sample(grid, [&](double x) { return phi_kappa(x, fp.kappa); });
  const auto zero = grid.like(0.0);
  for (const auto& phi : phis) {
    const PsiField field = conv(phi, matched_tails(phi, fp.kappa));
    for (double t : times) {
      record_super(suite.phi_kappa, residual_L(u_kappa, zero, t, field, family), suite.slack);
      record_super(suite.plateau, residual_L(grid.like(fp.plateau), zero, t, field, family), suite.slack);

      const auto lower = sample(grid, [&](double x) { return family.phi_lower(x, t); });
      const auto lower_dt = sample(grid, [&](double x) { return family.phi_lower_dt(x, t); });
      const double xm = family.turning_points(t).x_minus;
      const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil((xm - grid.x0) / grid.dx)));
      record_sub(suite.lower, residual_L(lower, lower_dt, t, field, family), suite.slack, first);

      for (double delta : suite.deltas)
        record_sub(suite.constant, residual_L(grid.like(delta), zero, t, field, family), suite.slack, 0);
    }
  }
  return suite;
}

}  // namespace chemofront
