#pragma once

namespace chemofront {

/// Chemotaxis constants: sensitivity chi, production mu, degradation lambda.
struct ChemoParams {
  double chi = 0.0;
  double mu = 1.0;
  double lambda = 1.0;

  double chi_mu() const noexcept { return chi * mu; }
};

void validate(const ChemoParams& p);

}  // namespace chemofront
