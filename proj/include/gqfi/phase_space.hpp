#pragma once

#include <array>
#include <utility>

#include <Eigen/Dense>

#include "gqfi/errors.hpp"

namespace gqfi {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;

// Quadrature vector ordering. QQPP is (q1,q2,p1,p2), QPQP is (q1,p1,q2,p2).
// Everything internal works in QQPP; QPQP exists for I/O and for construction
// from block matrices written per-mode.
enum class ModeOrdering { QQPP, QPQP };

/// Index permutation taking a QQPP-ordered vector to QPQP and back (involutive).
const std::array<int, 4>& ordering_permutation();

/// Symplectic form for the given ordering. In QQPP this is ((0,I2),(-I2,0)).
Mat4 symplectic_form(ModeOrdering ordering);

// Units: hbar = 2, vacuum quadrature variance 1 (sigma_vac = I).
struct GaussianState {
  Vec4 d = Vec4::Zero();
  Mat4 sigma = Mat4::Identity();
  ModeOrdering ordering = ModeOrdering::QQPP;
};

struct SingleModeState {
  Vec2 d = Vec2::Zero();
  Mat2 sigma = Mat2::Identity();
};

struct PhysicalityReport {
  bool is_physical = false;
  std::array<double, 2> symplectic_eigenvalues{};  // descending
  double min_eigen_slack = 0.0;                    // min(Lambda) - 1
  double symmetry_defect = 0.0;                    // max |sigma - sigma^T|
};

inline constexpr double kPhysicalitySlack = 1e-12;

/// Builds a state from raw moments: symmetrizes sigma and checks physicality.
GaussianState make_state(const Vec4& d, const Mat4& sigma,
                         ModeOrdering ordering = ModeOrdering::QQPP);

/// Reorders the quadrature vector between QQPP and QPQP. Involutive and exact.
GaussianState convert_ordering(const GaussianState& state, ModeOrdering target);

PhysicalityReport validate_covariance(const Mat4& sigma, ModeOrdering ordering);

/// Both symplectic eigenvalues, descending. Computed two ways (trace formula
/// and |eig(i Omega sigma)|) which must agree to 1e-10 relative.
std::pair<double, double> symplectic_eigenvalues(const Mat4& sigma,
                                                 ModeOrdering ordering = ModeOrdering::QQPP);

/// The four real eigenvalues of C = i Omega sigma, sorted ascending.
/// They come in +/- pairs; |lambda| equals the symplectic spectrum.
std::array<double, 4> c_matrix_eigenvalues(const Mat4& sigma,
                                           ModeOrdering ordering = ModeOrdering::QQPP);

/// Reduced single-mode state of mode 1 or 2.
SingleModeState partial_trace(const GaussianState& state, int keep_mode);

/// Gaussian Wigner density at phase-space point x, normalized to unit integral.
double wigner_at(const GaussianState& state, const Vec4& x);

}  // namespace gqfi
