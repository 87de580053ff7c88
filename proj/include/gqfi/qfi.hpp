#pragma once

#include <array>
#include <string>

#include "gqfi/channels.hpp"
#include "gqfi/fidelity.hpp"

namespace gqfi {

enum class QfiEngine { ClosedForm, EigenForm, FidelityLimit };

QfiEngine parse_engine(const std::string& name);
std::string engine_name(QfiEngine e);

struct QfiFlags {
  bool near_pure = false;
  bool near_degenerate = false;
  bool step_limited = false;
  bool fallback = false;  // set by sweep layer when the requested engine errored

  std::string to_string() const;
};

struct QfiResult {
  double value = 0.0;
  QfiEngine engine = QfiEngine::ClosedForm;
  std::array<double, 2> lambda_pair{1.0, 1.0};
  QfiFlags flags;
};

/// QFI from the closed matrix-function form: trace terms in C = i Omega sigma
/// plus the symplectic-eigenvalue-derivative term, with derivatives taken
/// analytically through the trace formula for Lambda.
QfiResult qfi_closed_form(const ProbeParams& p, Parameter which,
                          CovarianceModel model = CovarianceModel::Tabulated);

/// QFI from the spectral decomposition of C: all trace terms are evaluated as
/// sums over eigenvalue pairs weighted by the matrix elements of dC/dtheta in
/// the eigenbasis. The diagonal part alone reproduces the eigenvalue-only
/// expression; the off-diagonal part carries the eigenvector motion and is
/// required for agreement with the other engines.
QfiResult qfi_eigen_form(const ProbeParams& p, Parameter which,
                         CovarianceModel model = CovarianceModel::Tabulated);

/// QFI as the local curvature of the fidelity: symmetric stencil with
/// Richardson extrapolation. The step widens automatically when 1 - sqrt(F)
/// sinks toward the determinant roundoff floor or when the formula's bracket
/// degenerates (pure-state families).
QfiResult qfi_fidelity_limit(const ProbeParams& p, Parameter which,
                             CovarianceModel model = CovarianceModel::Tabulated,
                             double step = 1e-3);

QfiResult qfi_by_engine(QfiEngine engine, const ProbeParams& p, Parameter which,
                        CovarianceModel model);

/// Shifts the selected parameter by delta (used by stencil evaluations).
ProbeParams with_parameter(const ProbeParams& p, Parameter which, double value);
double get_parameter(const ProbeParams& p, Parameter which);

}  // namespace gqfi
