#include "chemofront/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <boost/math/tools/minima.hpp>

#include "chemofront/errors.hpp"
#include "chemofront/roots.hpp"

namespace chemofront {
namespace {

double eta_unchecked(double kappa, double lambda) {
  const double gap = lambda - kappa * kappa;
  if (gap <= 0.0) return std::numeric_limits<double>::infinity();
  return kappa * (std::sqrt(gap) + kappa) / gap;
}

double chemo_ratio(const ChemoParams& params, double b_inf) {
  const double cm = params.chi_mu();
  if (!(b_inf > cm)) throw Error(ErrorKind::hypothesis_violation, "b_inf must exceed chi*mu");
  return (b_inf - cm) / cm;
}

}  // namespace

double eta(double kappa, double lambda) {
  if (!(lambda > 0.0) || !(kappa > 0.0) || !(kappa * kappa < lambda))
    throw Error(ErrorKind::domain, "eta needs 0 < kappa < sqrt(lambda)");
  return eta_unchecked(kappa, lambda);
}

KappaChi kappa_chi(const ChemoParams& params, double b_inf) {
  validate(params);
  const double root_lambda = std::sqrt(params.lambda);
  if (params.chi == 0.0) return {root_lambda, true};
  const double ratio = chemo_ratio(params, b_inf);
  const double hi = std::nextafter(root_lambda, 0.0);
  const double k = bisect_root([&](double x) { return eta_unchecked(x, params.lambda) - ratio; }, 0.0, hi, 0.0);
  return {k, false};
}

CriticalSpeed c_star(const ChemoParams& params, const CoefficientPair& pair) {
  if (!check_hypotheses(pair, params).h1)
    throw Error(ErrorKind::hypothesis_violation, "(H1) b_inf > chi*mu*(1 + a_sup/a_inf) fails");
  const double abar = pair.a.lower_mean();
  const double root_a = std::sqrt(abar);
  CriticalSpeed out;
  out.kappa_chi = kappa_chi(params, pair.b.inf()).value;
  if (out.kappa_chi >= root_a) {
    out.kappa_star = root_a;
    out.c_star = 2.0 * root_a;
  } else {
    out.kappa_star = out.kappa_chi;
    out.c_star = (abar + out.kappa_star * out.kappa_star) / out.kappa_star;
  }
  return out;
}

WaveSpeed::WaveSpeed(const CoefficientPair& pair, double kappa) : a_(pair.a), kappa_(kappa) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::domain, "wave speed needs kappa > 0");
  lower_mean_ = (a_.lower_mean() + kappa * kappa) / kappa;
}

WaveSpeed wave_speed_fn(const CoefficientPair& pair, double kappa) { return WaveSpeed(pair, kappa); }

ExponentShift::ExponentShift(const CoefficientPair& pair, double kappa, double epsilon) {
  if (pair.a.is_constant()) return;
  const auto period = pair.a.period();
  if (!period)
    throw Error(ErrorKind::domain, "A(t) is only constructed for constant or periodic coefficients");
  a_ = pair.a;
  scale_ = epsilon / kappa;
  mean_ = pair.a.lower_mean();

  // A is periodic: scan one period, then polish both extremes.
  const std::size_t n = 8192;
  const double h = *period / static_cast<double>(n);
  std::size_t imin = 0, imax = 0;
  double vmin = 0.0, vmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = (*this)(h * static_cast<double>(i));
    if (v < vmin) vmin = v, imin = i;
    if (v > vmax) vmax = v, imax = i;
  }
  const auto polish = [&](std::size_t i, double sign) {
    const double t = h * static_cast<double>(i);
    return sign * boost::math::tools::brent_find_minima([&](double s) { return sign * (*this)(s); }, t - h,
                                                        t + h, 52)
                      .second;
  };
  vmin = std::min(vmin, polish(imin, 1.0));
  vmax = std::max(vmax, polish(imax, -1.0));
  sup_ = vmax;
  sup_norm_ = std::max(std::abs(vmin), std::abs(vmax));
}

double ExponentShift::operator()(double t) const {
  if (!a_) return 0.0;
  return scale_ * (mean_ * t - a_->integral(0.0, t));
}

double ExponentShift::derivative(double t) const {
  if (!a_) return 0.0;
  return scale_ * (mean_ - (*a_)(t));
}

double choose_epsilon(const CoefficientPair& pair, const ChemoParams& params, double kappa) {
  const double abar = pair.a.lower_mean();
  const double kc = kappa_chi(params, pair.b.inf()).value;
  if (!(kappa > 0.0) || !(kappa < std::min(kc, std::sqrt(abar))))
    throw Error(ErrorKind::domain, "kappa must lie in (0, min{kappa_chi, sqrt(abar)})");
  const double cap = std::min(kappa, (abar - kappa * kappa) / kappa);
  if (params.chi == 0.0) return 0.5 * cap;

  const double ratio = chemo_ratio(params, pair.b.inf());
  const double gap = params.lambda - kappa * kappa;
  const double root = std::sqrt(gap);
  // Positive while the second admissibility condition holds; decreasing in e.
  const auto margin = [&](double e) { return ratio - ((kappa + e) * (root + kappa) - params.lambda) / gap; };
  if (!(margin(0.0) > 0.0)) throw Error(ErrorKind::internal, "no admissible epsilon");
  const double sup = margin(cap) > 0.0 ? cap : bisect_root(margin, 0.0, cap);
  return 0.5 * sup;
}

FrontParams front_constants(const CoefficientPair& pair, const ChemoParams& params, double kappa,
                            double epsilon) {
  const auto report = check_hypotheses(pair, params);
  if (!report.h1) throw Error(ErrorKind::hypothesis_violation, "(H1) fails");
  const double abar = pair.a.lower_mean();
  const double cm = params.chi_mu();
  const double lambda = params.lambda;
  const CriticalSpeed cs = c_star(params, pair);
  if (!(kappa > 0.0) || !(kappa < std::min(cs.kappa_chi, std::sqrt(abar))))
    throw Error(ErrorKind::domain, "kappa must lie in (0, min{kappa_chi, sqrt(abar)})");
  if (!(epsilon > 0.0) || !(epsilon < std::min(kappa, (abar - kappa * kappa) / kappa)))
    throw Error(ErrorKind::domain, "epsilon violates 0 < eps < min{kappa, (abar - kappa^2)/kappa}");

  FrontParams fp;
  fp.kappa = kappa;
  fp.epsilon = epsilon;
  fp.kappa_chi = cs.kappa_chi;
  fp.c_star = cs.c_star;
  fp.A0 = epsilon / (2.0 * kappa) * (abar - kappa * (kappa + epsilon));

  const double b_inf = pair.b.inf(), b_sup = pair.b.sup();
  if (cm > 0.0) {
    const double gap = lambda - kappa * kappa;
    const double root = std::sqrt(gap);
    fp.A1 = b_sup - cm + cm * (kappa * (root + kappa) + lambda) / gap;
    fp.A2 = b_inf - cm + cm * (lambda - (kappa + epsilon) * (root + kappa)) / gap;
  } else {
    fp.A1 = b_sup;
    fp.A2 = b_inf;
  }
  if (!(fp.A1 > 0.0) || !(fp.A2 > 0.0))
    throw Error(ErrorKind::constant_sign, "A1 and A2 must be positive; epsilon is not admissible");

  fp.A = ExponentShift(pair, kappa, epsilon);
  fp.d = std::exp(fp.A.sup_norm()) * (1.0 + fp.A0 / fp.A1);
  fp.plateau = pair.a.sup() / (b_inf - cm);
  fp.delta_cap = report.h1_margin / ((b_inf - cm) * (b_sup - cm));
  // peak(t) = (eps/kappa) exp(-(kappa/eps) A(t) - ((kappa+eps)/eps) ln((kappa+eps) d / kappa))
  const double log_term = std::log((kappa + epsilon) * fp.d / kappa);
  fp.inf_peak = epsilon / kappa * std::exp(-(kappa / epsilon) * fp.A.sup() - (kappa + epsilon) / epsilon * log_term);
  fp.delta0 = 0.5 * std::min(fp.delta_cap, fp.inf_peak);

  // Growth: A'(t) + eps (c_kappa(t) - 2 kappa - eps) > A0 on a sampled period.
  const WaveSpeed c(pair, kappa);
  const double span = pair.a.period().value_or(1.0);
  for (int i = 0; i < 10000; ++i) {
    const double t = span * i / 10000.0;
    if (!(fp.A.derivative(t) + epsilon * (c(t) - 2.0 * kappa - epsilon) > fp.A0))
      throw Error(ErrorKind::internal, "A(t) violates the growth inequality");
  }
  if (!(fp.A0 > 0.0) || !(fp.d > 1.0) || !(fp.delta0 > 0.0))
    throw Error(ErrorKind::internal, "front constants violate their invariants");
  return fp;
}

FrontParams front_constants(const CoefficientPair& pair, const ChemoParams& params, double kappa) {
  return front_constants(pair, params, kappa, choose_epsilon(pair, params, kappa));
}

LambdaThreshold lambda_threshold(const ChemoParams& params, const CoefficientPair& pair) {
  const double abar = pair.a.lower_mean();
  if (params.chi == 0.0) return {abar, true};
  const double ratio = chemo_ratio(params, pair.b.inf());
  const double root_a = std::sqrt(abar);
  // Strictly decreasing in s = lambda - abar, from +inf to 0.
  const auto g = [&](double s) { return root_a * (std::sqrt(s) + root_a) / s - ratio; };
  double hi = abar;
  while (g(hi) > 0.0) hi *= 2.0;
  double lo = hi;
  while (g(lo) < 0.0) lo *= 0.5;
  return {abar + bisect_root(g, lo, hi, 0.0), false};
}

bool small_chi_criterion(const ChemoParams& params, const CoefficientPair& pair) {
  const double abar = pair.a.lower_mean();
  const double lambda = params.lambda;
  if (!(lambda > abar)) throw Error(ErrorKind::domain, "small-chi criterion needs lambda > abar");
  if (params.chi == 0.0) return true;
  const double a_inf = pair.a.inf(), a_sup = pair.a.sup(), b_inf = pair.b.inf();
  const double s = lambda - abar;
  const double cap1 = a_inf * b_inf / (a_inf + a_sup);
  const double cap2 = b_inf * s / (s + std::sqrt(abar) * (std::sqrt(s) + std::sqrt(abar)));
  return params.chi_mu() < std::min(cap1, cap2);
}

}  // namespace chemofront
