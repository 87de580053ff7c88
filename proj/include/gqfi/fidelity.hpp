#pragma once

#include "gqfi/phase_space.hpp"

namespace gqfi {

struct FidelityBreakdown {
  double value = 1.0;
  double gaussian_exponent = 0.0;  // exponent of the displacement factor
  double det_gamma = 0.0;          // det(I + C1 C2)
  double det_lambda = 0.0;         // det(sigma1 + i Omega) det(sigma2 + i Omega)
  double det_delta = 0.0;          // det(sigma1 + sigma2)
  double conditioning = 0.0;       // smallest relative magnitude among denominator parts
};

/// Uhlmann fidelity between two-mode Gaussian states via the determinant formula.
FidelityBreakdown uhlmann_fidelity(const GaussianState& s1, const GaussianState& s2);

/// sqrt(2 (1 - sqrt(F))).
double bures_distance(const GaussianState& s1, const GaussianState& s2);

/// Single-mode Gaussian fidelity (same conventions), used for reduced-state work.
double uhlmann_fidelity_single_mode(const SingleModeState& s1, const SingleModeState& s2);

}  // namespace gqfi
