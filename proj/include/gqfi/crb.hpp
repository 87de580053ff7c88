#pragma once

#include <cstdint>

#include "gqfi/qfi.hpp"

namespace gqfi {

/// Heterodyne measurement on both modes: outcomes are Gaussian with covariance
/// sigma + I (one added vacuum unit per quadrature) and mean equal to the
/// displacement. States here carry zero displacement.
struct MeasurementModel {
  Mat4 outcome_cov = Mat4::Identity();
  Vec4 outcome_mean = Vec4::Zero();
};

MeasurementModel measurement_model(const ProbeParams& p);

/// Independent draws from the measurement model at theta_star (substituted for
/// the selected parameter). Deterministic for a fixed seed: each stream is an
/// mt19937_64 seeded through splitmix64, sampled with the Box-Muller
/// transform and correlated through the Cholesky factor of the covariance.
Eigen::MatrixXd sample_outcomes(const ProbeParams& p, Parameter which, double theta_star,
                                int shots, std::uint64_t seed);

/// Per-shot classical Fisher information of the heterodyne model with known
/// zero mean: (1/2) tr[(Sigma^-1 dSigma)^2].
double classical_fisher(const ProbeParams& p, Parameter which);

/// Maximum-likelihood estimate of the selected parameter from a measurement
/// record, by golden-section search plus a local quadratic polish.
double mle_estimate(const Eigen::MatrixXd& record, const ProbeParams& p, Parameter which,
                    double search_lo, double search_hi);

struct CrbReport {
  Parameter which = Parameter::Phi;
  double theta_star = 0.0;
  int shots = 0;
  int trials = 0;
  double empirical_variance = 0.0;
  double crb = 0.0;           // 1 / (shots * QFI)
  double classical_fi = 0.0;  // per shot
  double classical_bound = 0.0;  // 1 / (shots * classical_fi)
  double qfi = 0.0;
  double bias = 0.0;
  std::uint64_t seed = 0;
};

/// Runs `trials` independent MLE experiments of `shots` heterodyne outcomes
/// each and compares the estimator variance against the bounds. Trials run in
/// parallel on per-trial seed substreams; aggregation is a fixed-order
/// pairwise reduction, so the report does not depend on the thread count.
CrbReport crb_report(const ProbeParams& p, Parameter which, double theta_star, int shots,
                     int trials, std::uint64_t seed);
CrbReport crb_report_serial(const ProbeParams& p, Parameter which, double theta_star,
                            int shots, int trials, std::uint64_t seed);

}  // namespace gqfi
