#include "chemofront/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chemofront {

PsiSchedule::PsiSchedule(PsiField steady) { slices_.push_back(std::move(steady)); }

PsiSchedule::PsiSchedule(std::vector<PsiField> slices, double period) : slices_(std::move(slices)), period_(period) {
  if (slices_.empty()) throw Error(ErrorKind::shape, "psi schedule needs at least one slice");
  if (slices_.size() > 1 && !(period > 0.0)) throw Error(ErrorKind::domain, "psi schedule period must be positive");
}

void PsiSchedule::at(double t, PsiField& out) const {
  if (slices_.size() == 1) {
    out = slices_.front();
    return;
  }
  const auto m = static_cast<double>(slices_.size());
  double s = std::fmod(t / period_, 1.0);
  if (s < 0.0) s += 1.0;
  s *= m;
  const auto i = std::min(static_cast<std::size_t>(s), slices_.size() - 1);
  const std::size_t j = (i + 1) % slices_.size();
  const double w = s - static_cast<double>(i);
  const auto& a = slices_[i];
  const auto& b = slices_[j];
  out.psi = a.psi;
  out.dpsi = a.dpsi;
  for (std::size_t k = 0; k < a.psi.size(); ++k) {
    out.psi[k] = (1.0 - w) * a.psi[k] + w * b.psi[k];
    out.dpsi[k] = (1.0 - w) * a.dpsi[k] + w * b.dpsi[k];
  }
}

ImexStepper::ImexStepper(CoefficientPair pair, ChemoParams params, EntireLogistic entire, double kappa)
    : pair_(std::move(pair)), params_(params), entire_(std::move(entire)), kappa_(kappa) {
  validate(params_);
}

TailSpec lab_tails(const GridProfile& u, double lambda) {
  TailSpec t;
  t.left = TailSide::constant(u.values.front());
  const std::size_t n = u.size();
  const double end = u[n - 1], before = u[n - 2];
  if (end > 0.0 && before > end) {
    const double rate = std::min(std::log(before / end) / u.dx, 50.0 * std::sqrt(lambda));
    t.right = TailSide::exponential(end * std::exp(rate * u.x_end()), rate);
  } else if (end > 0.0) {
    t.right = TailSide::constant(end);
  }
  return t;
}

PsiField ImexStepper::lab_field(const GridProfile& u) const {
  return GreenConvolver(u.dx, params_.lambda, params_.mu)(u, lab_tails(u, params_.lambda));
}

void ImexStepper::step_moving(SolverState& s, const PsiField& field) const {
  if (s.frame != Frame::moving) throw Error(ErrorKind::internal, "step_moving on a lab-frame state");
  advance(s, s.dt, field.psi, field.dpsi, (pair_.a(s.t) + kappa_ * kappa_) / kappa_);
}

void ImexStepper::step_lab(SolverState& s) const {
  if (s.frame != Frame::lab) throw Error(ErrorKind::internal, "step_lab on a moving-frame state");
  const auto field = lab_field(s.u);
  advance(s, s.dt, field.psi, field.dpsi, 0.0);
}

void ImexStepper::advance(SolverState& s, double h, const GridProfile& psi, const GridProfile& dpsi,
                          double frame_speed) const {
  auto& u = s.u;
  require_same_grid(u, psi, "solver step");
  const std::size_t n = u.size();
  const double dx = u.dx;
  const auto [a, b] = pair_(s.t);
  const double chi = params_.chi, cm = params_.chi_mu(), lam = params_.lambda;

  double max_adv = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_adv = std::max(max_adv, std::abs(frame_speed - chi * dpsi[i]));
  if (h * 2.0 * max_adv > dx * (1.0 + 1e-12))
    throw Error(ErrorKind::timestep, "dt = " + std::to_string(h) + " violates dt <= dx/(2 max|advection|)");

  // Right-hand side and tridiagonal system (I - h D2) u_new = rhs.
  const double r = h / (dx * dx);
  std::vector<double> rhs(n), diag(n, 1.0 + 2.0 * r), lower(n, -r), upper(n, -r);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double adv = frame_speed - chi * dpsi[i];
    const double reaction = a - chi * lam * psi[i] - (b - cm) * u[i];
    rhs[i] = u[i] + h * (adv * (u[i + 1] - u[i - 1]) / (2.0 * dx) + reaction * u[i]);
  }
  const double t_new = s.t + h;
  if (s.left.kind == LeftBoundary::Kind::dirichlet_entire) {
    diag[0] = 1.0;
    upper[0] = 0.0;
    rhs[0] = entire_(t_new);
  } else {
    // ghost node u[-1] = u[1]; the central first difference vanishes there
    const double reaction = a - chi * lam * psi[0] - (b - cm) * u[0];
    rhs[0] = u[0] + h * reaction * u[0];
    upper[0] = -2.0 * r;
  }
  diag[n - 1] = 1.0;
  lower[n - 1] = 0.0;
  rhs[n - 1] = s.right.value(u.x_end());

  // Thomas algorithm
  for (std::size_t i = 1; i < n; ++i) {
    const double m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  u[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) u[i] = (rhs[i] - upper[i] * u[i + 1]) / diag[i];

  const double floor = -10.0 * dx * dx;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(u[i])) throw Error(ErrorKind::divergence, "non-finite value at t = " + std::to_string(t_new));
    if (u[i] < 0.0) {
      if (u[i] < floor)
        throw Error(ErrorKind::divergence, "undershoot " + std::to_string(u[i]) + " at x = " + std::to_string(u.x(i)));
      u[i] = 0.0;
      ++s.clips;
    }
  }
  s.t = t_new;
}

void ImexStepper::evolve(SolverState& s, double t_end, const PsiSchedule* schedule,
                         const std::function<void(const SolverState&)>& record, double record_every) const {
  if (s.frame == Frame::moving && !schedule) throw Error(ErrorKind::internal, "moving-frame evolution needs psi");
  if (!(s.dt > 0.0)) throw Error(ErrorKind::timestep, "dt must be positive");
  const double t_start = s.t;
  const double eps = 1e-9 * s.dt;
  std::size_t records = 0;
  if (record) record(s);
  const auto next_record = [&] { return t_start + static_cast<double>(records + 1) * record_every; };
  PsiField field;
  while (s.t < t_end - eps) {
    const double h = std::min(s.dt, t_end - s.t);
    if (s.frame == Frame::moving) {
      schedule->at(s.t, field);
      advance(s, h, field.psi, field.dpsi, (pair_.a(s.t) + kappa_ * kappa_) / kappa_);
    } else {
      field = lab_field(s.u);
      advance(s, h, field.psi, field.dpsi, 0.0);
    }
    if (record && record_every > 0.0 && s.t >= next_record() - eps) {
      record(s);
      ++records;
    }
  }
}

}  // namespace chemofront
