#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "chemofront/coefficients.hpp"
#include "chemofront/elliptic.hpp"
#include "chemofront/grid.hpp"
#include "chemofront/params.hpp"

namespace chemofront {

enum class Frame { moving, lab };

struct LeftBoundary {
  enum class Kind { dirichlet_entire, neumann_zero };
  Kind kind = Kind::dirichlet_entire;  ///< dirichlet_entire pins u(x0) to u*(t)
};

struct RightBoundary {
  enum class Kind { dirichlet_exponential, dirichlet_zero };
  Kind kind = Kind::dirichlet_zero;
  double amplitude = 1.0;  ///< u(x_end) = amplitude * exp(-rate * x_end)
  double rate = 0.0;
  double value(double x_end) const {
    return kind == Kind::dirichlet_zero ? 0.0 : amplitude * std::exp(-rate * x_end);
  }
};

struct SolverState {
  GridProfile u;
  double t = 0.0;
  double dt = 0.005;
  Frame frame = Frame::moving;
  LeftBoundary left;
  RightBoundary right;
  std::size_t clips = 0;  ///< nodes reset from small negative undershoot to zero
};

/// psi and its gradient as a function of time: one field, or slices over one period
/// interpolated linearly.
class PsiSchedule {
 public:
  explicit PsiSchedule(PsiField steady);
  PsiSchedule(std::vector<PsiField> slices, double period);
  void at(double t, PsiField& out) const;
  bool steady() const noexcept { return slices_.size() == 1; }
  const std::vector<PsiField>& slices() const noexcept { return slices_; }
  double period() const noexcept { return period_; }

 private:
  std::vector<PsiField> slices_;
  double period_ = 0.0;
};

/// IMEX Euler: diffusion implicit, advection (central differences) and reaction explicit.
class ImexStepper {
 public:
  /// `kappa` sets the frame speed c_kappa(t) for the moving frame and is ignored in the lab frame.
  ImexStepper(CoefficientPair pair, ChemoParams params, EntireLogistic entire, double kappa = 0.0);

  /// One step of the frozen-phi moving-frame equation.
  void step_moving(SolverState& s, const PsiField& field) const;
  /// One step of the coupled system; v is refreshed from u before the step.
  void step_lab(SolverState& s) const;
  /// Advances to t_end with fixed dt (the last step shortened). `field` supplies psi
  /// for the moving frame; `record` (if set) receives (t, u) every `record_every` time.
  void evolve(SolverState& s, double t_end, const PsiSchedule* schedule,
              const std::function<void(const SolverState&)>& record = {}, double record_every = 0.0) const;

  const CoefficientPair& pair() const noexcept { return pair_; }
  const ChemoParams& params() const noexcept { return params_; }
  const EntireLogistic& entire() const noexcept { return entire_; }
  double kappa() const noexcept { return kappa_; }
  /// v and v_x of the lab frame for the given u.
  PsiField lab_field(const GridProfile& u) const;

 private:
  void advance(SolverState& s, double h, const GridProfile& psi, const GridProfile& dpsi, double frame_speed) const;

  CoefficientPair pair_;
  ChemoParams params_;
  EntireLogistic entire_;
  double kappa_;
};

/// Tails for the lab-frame chemical solve: constant on the left, a fitted exponential
/// (or zero) on the right.
TailSpec lab_tails(const GridProfile& u, double lambda);

}  // namespace chemofront
