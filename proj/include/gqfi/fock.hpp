#pragma once

#include <Eigen/Dense>

#include "gqfi/channels.hpp"

namespace gqfi {

/// Dense operator over the truncated two-mode Fock basis |n1> (x) |n2>,
/// row-major in n1 (index = n1 * dim_per_mode + n2).
struct FockOperator {
  int dim_per_mode = 0;
  Eigen::MatrixXcd matrix;
};

enum class FockUnitaryKind { BeamSplitter, Squeezer };

/// Product of two thermal states, diagonal in the Fock basis. The truncation
/// deficit 1 - tr(rho) is written to *deficit when provided; deficits above
/// 1e-6 are rejected because the oracle tolerances assume them negligible.
FockOperator fock_thermal(double nbar, double mbar, int cutoff, double* deficit = nullptr);

/// exp of the anti-Hermitian generator built from truncated ladder operators.
/// The squeezer generator is theta (a1+ a2+ - a1 a2), the calibration for which
/// the induced covariance matches the phase-space channels at the same theta.
FockOperator fock_unitary(FockUnitaryKind kind, double theta, int cutoff);

/// Max |(U+U - I)| over the low-photon block (n1 + n2 <= cutoff / 2).
double unitary_defect_low_block(const FockOperator& u);

/// B(phi) S(r) rho0 S(r)+ B(phi)+ in the truncated basis.
FockOperator fock_probe(const ProbeParams& p, int cutoff);

/// (tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2 via Hermitian eigendecompositions.
double fock_fidelity(const FockOperator& rho1, const FockOperator& rho2);

/// Probe-pair fidelity with a cutoff ladder: values at cutoff-5 and cutoff must
/// agree to 1e-5 or NotConverged is thrown (carrying both values).
double fock_probe_fidelity(const ProbeParams& a, const ProbeParams& b, int cutoff,
                           bool check_convergence = false);

/// Finite-difference QFI from the Fock fidelity, Richardson-extrapolated over
/// steps (step, step/2).
double fock_qfi(const ProbeParams& p, Parameter which, double step, int cutoff);

/// Quadrature covariance matrix (QQPP) of a Fock density, for calibration tests.
Mat4 fock_covariance(const FockOperator& rho);

/// tr(rho n_mode), mode in {1,2}.
double fock_mean_photon(const FockOperator& rho, int mode);

}  // namespace gqfi
