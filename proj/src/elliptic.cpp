#include "chemofront/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <boost/math/quadrature/gauss.hpp>

namespace chemofront {

double TailSide::value(double x) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::constant: return amplitude;
    case Kind::exponential: return amplitude * std::exp(-rate * x);
  }
  return 0.0;
}

TailSpec matched_tails(const GridProfile& u, double right_rate) {
  TailSpec t;
  t.left = TailSide::constant(u.values.front());
  if (right_rate > 0.0)
    t.right = TailSide::exponential(u.values.back() * std::exp(right_rate * u.x_end()), right_rate);
  return t;
}

namespace {

// Node offsets (in cells, relative to the cell's left node) for the three stencils.
constexpr std::array<std::array<double, 4>, 3> offsets{{{-1, 0, 1, 2}, {0, 1, 2, 3}, {-2, -1, 0, 1}}};
constexpr std::size_t interior = 0, first_cell = 1, last_cell = 2;

double lagrange(const std::array<double, 4>& nodes, std::size_t j, double s) {
  double v = 1.0;
  for (std::size_t k = 0; k < 4; ++k)
    if (k != j) v *= (s - nodes[k]) / (nodes[j] - nodes[k]);
  return v;
}

// Integral over (-inf, x0] of exp(-root (x0 - y)) * tail(y).
double left_tail_integral(const TailSide& t, double x0, double root) {
  switch (t.kind) {
    case TailSide::Kind::zero: return 0.0;
    case TailSide::Kind::constant: return t.amplitude / root;
    case TailSide::Kind::exponential:
      if (!(t.rate < root)) throw Error(ErrorKind::domain, "left exponential tail decays too slowly");
      return t.amplitude * std::exp(-t.rate * x0) / (root - t.rate);
  }
  return 0.0;
}

// Integral over [x1, inf) of exp(-root (y - x1)) * tail(y).
double right_tail_integral(const TailSide& t, double x1, double root) {
  switch (t.kind) {
    case TailSide::Kind::zero: return 0.0;
    case TailSide::Kind::constant: return t.amplitude / root;
    case TailSide::Kind::exponential:
      if (!(t.rate + root > 0.0)) throw Error(ErrorKind::domain, "right exponential tail grows too fast");
      return t.amplitude * std::exp(-t.rate * x1) / (root + t.rate);
  }
  return 0.0;
}

bool mismatched(double profile_end, double tail_end) {
  const double scale = std::max(std::abs(profile_end), std::abs(tail_end));
  return std::abs(profile_end - tail_end) > 0.05 * scale + 1e-10;
}

}  // namespace

GreenConvolver::GreenConvolver(double dx, double lambda, double mu)
    : dx_(dx), lambda_(lambda), mu_(mu), root_(std::sqrt(lambda)), decay_(std::exp(-std::sqrt(lambda) * dx)) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::domain, "screened Poisson solve needs lambda > 0");
  if (!(dx > 0.0)) throw Error(ErrorKind::domain, "grid spacing must be positive");
  using boost::math::quadrature::gauss;
  for (std::size_t st = 0; st < 3; ++st) {
    for (std::size_t j = 0; j < 4; ++j) {
      const auto basis = [&](double tau) { return lagrange(offsets[st], j, tau / dx); };
      weights_[0][st][j] =
          gauss<double, 10>::integrate([&](double tau) { return std::exp(-root_ * (dx - tau)) * basis(tau); }, 0.0, dx);
      weights_[1][st][j] =
          gauss<double, 10>::integrate([&](double tau) { return std::exp(-root_ * tau) * basis(tau); }, 0.0, dx);
    }
  }
}

PsiField GreenConvolver::operator()(const GridProfile& u, const TailSpec& tails) const {
  PsiField out{u.like(), u.like()};
  apply(u, tails, out);
  return out;
}

void GreenConvolver::apply(const GridProfile& u, const TailSpec& tails, PsiField& out) const {
  const std::size_t n = u.size();
  if (n < GridProfile::min_nodes) throw Error(ErrorKind::shape, "profile needs at least 16 nodes");
  if (std::abs(u.dx - dx_) > 1e-12 * dx_) throw Error(ErrorKind::shape, "convolver built for another spacing");
  if (!out.psi.same_grid(u)) out.psi = u.like();
  if (!out.dpsi.same_grid(u)) out.dpsi = u.like();

  const auto& v = u.values;
  const auto cell = [&](std::size_t side, std::size_t c) {
    std::size_t st = interior, base = c - 1;
    if (c == 0) st = first_cell, base = 0;
    else if (c == n - 2) st = last_cell, base = n - 4;
    const auto& w = weights_[side][st];
    return w[0] * v[base] + w[1] * v[base + 1] + w[2] * v[base + 2] + w[3] * v[base + 3];
  };

  // Left sweep into psi, right sweep into dpsi, then combine.
  auto& left = out.psi.values;
  auto& right = out.dpsi.values;
  left[0] = left_tail_integral(tails.left, u.x0, root_);
  for (std::size_t c = 0; c + 1 < n; ++c) left[c + 1] = decay_ * left[c] + cell(0, c);
  right[n - 1] = right_tail_integral(tails.right, u.x_end(), root_);
  for (std::size_t c = n - 1; c-- > 0;) right[c] = decay_ * right[c + 1] + cell(1, c);

  const double psi_scale = mu_ / (2.0 * root_);
  for (std::size_t i = 0; i < n; ++i) {
    const double l = left[i], r = right[i];
    left[i] = psi_scale * (l + r);
    right[i] = 0.5 * mu_ * (r - l);
  }
}

PsiField green_convolve(const GridProfile& u, const TailSpec& tails, double lambda, double mu) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::domain, "screened Poisson solve needs lambda > 0");
  validate(u);
  check_tails(u, tails);
  return GreenConvolver(u.dx, lambda, mu)(u, tails);
}

void check_tails(const GridProfile& u, const TailSpec& tails) {
  if (mismatched(u.values.front(), tails.left.value(u.x0)))
    throw Error(ErrorKind::tail_mismatch, "left tail disagrees with the profile at x0");
  if (mismatched(u.values.back(), tails.right.value(u.x_end())))
    throw Error(ErrorKind::tail_mismatch, "right tail disagrees with the profile at x_end");
}

PsiBoundReport verify_psi_bounds(const PsiField& field, double kappa, const ChemoParams& params, double a_sup,
                                 double b_inf) {
  const auto& psi = field.psi;
  const auto& dpsi = field.dpsi;
  require_same_grid(psi, dpsi, "verify_psi_bounds");
  const double lambda = params.lambda, mu = params.mu;
  const double gap = lambda - kappa * kappa;
  if (!(kappa > 0.0) || !(gap > 0.0)) throw Error(ErrorKind::domain, "bounds need 0 < kappa < sqrt(lambda)");
  const double slack = 10.0 * psi.dx * psi.dx;
  const double plateau_bound = mu * a_sup / (lambda * (b_inf - params.chi_mu()));
  const double psi_coeff = mu / gap;
  const double grad_coeff = mu * (std::sqrt(gap) + kappa) / gap;

  PsiBoundReport r;
  r.psi_nonneg_margin = r.psi_upper_margin = r.dpsi_margin = INFINITY;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double e = std::exp(-kappa * psi.x(i));
    const double m0 = psi[i] + slack;
    const double m1 = std::min(plateau_bound, psi_coeff * e) + slack - psi[i];
    const double m2 = grad_coeff * e + slack - std::abs(dpsi[i]);
    r.psi_nonneg_margin = std::min(r.psi_nonneg_margin, m0);
    r.psi_upper_margin = std::min(r.psi_upper_margin, m1);
    r.dpsi_margin = std::min(r.dpsi_margin, m2);
    r.violations += (m0 < 0.0) + (m1 < 0.0) + (m2 < 0.0);
  }
  return r;
}

}  // namespace chemofront
