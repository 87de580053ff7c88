#pragma once

#include <array>
#include <string>
#include <vector>

#include "gqfi/phase_space.hpp"

namespace gqfi {

/// Probe parameterization: thermal occupations of the two input modes,
/// squeezing strength and beam-splitter angle.
struct ProbeParams {
  double nbar = 0.0;
  double mbar = 0.0;
  double r = 0.0;
  double phi = 0.0;

  double delta() const { return mbar - nbar; }  // m - n
  double total() const { return nbar + mbar; }  // n + m
};

/// Throws unless all entries are finite, occupations and r nonnegative.
void validate_params(const ProbeParams& p);

enum class Parameter { Phi, R, Nbar, Mbar };

Parameter parse_parameter(const std::string& name);
std::string parameter_name(Parameter p);

struct SymplecticMatrix {
  Mat4 m = Mat4::Identity();
  ModeOrdering ordering = ModeOrdering::QQPP;
};

/// Max |M Omega M^T - Omega| entry.
double symplectic_defect(const SymplecticMatrix& m);

SymplecticMatrix beam_splitter(double phi);
SymplecticMatrix two_mode_squeezer(double r);

GaussianState thermal_state(double nbar, double mbar);

GaussianState apply_symplectic(const GaussianState& state, const SymplecticMatrix& m);

/// The probe B(phi) S(r) rho0 S(r)^+ B(phi)^+ by direct conjugation of moments.
GaussianState build_probe(const ProbeParams& p);

// Which sigma(theta) family derivatives and engines act on:
//  - Conjugated: the probe covariance B S sigma0 S^T B^T (ground truth).
//  - Tabulated: the closed-form covariance table evaluated literally, including
//    its zero (3,4) entry which the conjugated result contradicts.
enum class CovarianceModel { Conjugated, Tabulated };

std::string covariance_model_name(CovarianceModel m);

struct TabulatedCovariance {
  Mat4 sigma = Mat4::Zero();              // QQPP
  Mat4 conjugated = Mat4::Zero();         // reference from build_probe
  std::vector<std::pair<int, int>> flagged;  // 0-based upper-triangle entries beyond 1e-9
  double max_discrepancy = 0.0;
};

/// Evaluates every tabulated entry literally and flags disagreements with the
/// conjugated reference (expected: the (3,4) entry for generic parameters).
TabulatedCovariance covariance_closed_form(const ProbeParams& p);

/// Covariance of the selected model (QQPP).
Mat4 probe_sigma(const ProbeParams& p, CovarianceModel model);

/// Analytic d sigma / d theta for the selected model (QQPP).
Mat4 d_sigma(const ProbeParams& p, Parameter which,
             CovarianceModel model = CovarianceModel::Conjugated);

}  // namespace gqfi
