#include "gqfi/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/LU>

namespace gqfi {

namespace {

// det(sigma + i Omega). The matrix is Hermitian, so the determinant is real;
// pivoted LU on the complex embedding, imaginary residue checked.
double det_sigma_plus_i_omega(const Mat4& sigma, const Mat4& omega) {
  Eigen::Matrix4cd h = sigma.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 1.0) * omega.cast<std::complex<double>>();
  const std::complex<double> det = Eigen::FullPivLU<Eigen::Matrix4cd>(h).determinant();
  return det.real();
}

}  // namespace

FidelityBreakdown uhlmann_fidelity(const GaussianState& s1, const GaussianState& s2) {
  if (s1.ordering != s2.ordering) {
    throw OrderingMismatchError("uhlmann_fidelity: states use different orderings");
  }
  const Mat4 omega = symplectic_form(s1.ordering);

  FidelityBreakdown out;
  // Gamma = det(I + C1 C2) with C = i Omega sigma, i.e. det(I - Omega s1 Omega s2).
  const Mat4 gamma_arg = Mat4::Identity() - omega * s1.sigma * omega * s2.sigma;
  out.det_gamma = Eigen::FullPivLU<Mat4>(gamma_arg).determinant();
  out.det_lambda =
      det_sigma_plus_i_omega(s1.sigma, omega) * det_sigma_plus_i_omega(s2.sigma, omega);
  const Mat4 ssum = s1.sigma + s2.sigma;
  out.det_delta = Eigen::FullPivLU<Mat4>(ssum).determinant();

  const double root_gamma = std::sqrt(std::max(out.det_gamma, 0.0));
  const double root_lambda = std::sqrt(std::max(out.det_lambda, 0.0));
  const double total = root_gamma + root_lambda;
  const double bracket = total * total - out.det_delta;
  const double denom = total - std::sqrt(std::max(bracket, 0.0));
  if (!(denom > 1e-300)) {
    throw DenominatorDegenerateError("uhlmann_fidelity: denominator below 1e-300");
  }
  // Relative size of the subtractive bracket: near zero the square root is
  // roundoff-dominated (pure-state pairs) and callers must widen stencils.
  out.conditioning = std::abs(bracket) / std::max(total * total, 1e-300);

  const Vec4 dd = s1.d - s2.d;
  out.gaussian_exponent = -0.5 * dd.dot(ssum.ldlt().solve(dd));
  const double f = 4.0 * std::exp(out.gaussian_exponent) / denom;

  // The overshoot allowance widens with the bracket's cancellation level;
  // anything beyond that indicates a genuine formula violation.
  const double overshoot_tol = (out.conditioning < 1e-11) ? 1e-7 : 1e-12;
  if (f > 1.0 + overshoot_tol) {
    throw NotPhysicalError("uhlmann_fidelity: value " + std::to_string(f) +
                           " exceeds 1 beyond tolerance");
  }
  out.value = std::min(f, 1.0);
  if (!(out.value > 0.0)) {
    throw DenominatorDegenerateError("uhlmann_fidelity: nonpositive value");
  }
  return out;
}

double bures_distance(const GaussianState& s1, const GaussianState& s2) {
  const double f = uhlmann_fidelity(s1, s2).value;
  return std::sqrt(std::max(2.0 * (1.0 - std::sqrt(f)), 0.0));
}

double uhlmann_fidelity_single_mode(const SingleModeState& s1, const SingleModeState& s2) {
  const Mat2 sum = s1.sigma + s2.sigma;
  const double big_delta = sum.determinant();
  const double big_lambda = (s1.sigma.determinant() - 1.0) * (s2.sigma.determinant() - 1.0);
  const double denom =
      std::sqrt(std::max(big_delta + big_lambda, 0.0)) - std::sqrt(std::max(big_lambda, 0.0));
  if (!(denom > 1e-300)) {
    throw DenominatorDegenerateError("uhlmann_fidelity_single_mode: degenerate denominator");
  }
  const Vec2 dd = s1.d - s2.d;
  const double expo = -0.5 * dd.dot(sum.ldlt().solve(dd));
  const double f = 2.0 * std::exp(expo) / denom;
  if (f > 1.0 + 1e-12) {
    throw NotPhysicalError("uhlmann_fidelity_single_mode: value exceeds 1");
  }
  return std::min(f, 1.0);
}

}  // namespace gqfi
