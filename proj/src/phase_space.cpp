#include "gqfi/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>

namespace gqfi {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool all_finite(const Mat4& m) {
  return m.allFinite();
}

// |eig(i Omega sigma)| via the Hermitian similarity sigma^{1/2} (i Omega)
// sigma^{1/2}. The self-adjoint solver keeps full precision at degenerate
// spectra (pure states), where a general solver loses half the digits.
std::array<double, 4> hermitian_c_spectrum(const Mat4& sym, const Mat4& omega) {
  Eigen::SelfAdjointEigenSolver<Mat4> ssolve(sym);
  const Mat4 half = ssolve.operatorSqrt();
  const Eigen::Matrix4cd herm =
      half.cast<std::complex<double>>() *
      (std::complex<double>(0.0, 1.0) * omega.cast<std::complex<double>>()) *
      half.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> hs(herm);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) lam[i] = hs.eigenvalues()(i);
  std::sort(lam.begin(), lam.end());
  return lam;
}

}  // namespace

const std::array<int, 4>& ordering_permutation() {
  // QQPP component k lives at QPQP position perm[k]: (q1,q2,p1,p2) -> (q1,p1,q2,p2)
  static const std::array<int, 4> perm{0, 2, 1, 3};
  return perm;
}

Mat4 symplectic_form(ModeOrdering ordering) {
  Mat4 omega = Mat4::Zero();
  if (ordering == ModeOrdering::QQPP) {
    omega.block<2, 2>(0, 2) = Mat2::Identity();
    omega.block<2, 2>(2, 0) = -Mat2::Identity();
  } else {
    for (int mode = 0; mode < 2; ++mode) {
      omega(2 * mode, 2 * mode + 1) = 1.0;
      omega(2 * mode + 1, 2 * mode) = -1.0;
    }
  }
  return omega;
}

GaussianState make_state(const Vec4& d, const Mat4& sigma, ModeOrdering ordering) {
  if (!all_finite(sigma) || !d.allFinite()) {
    throw NonFiniteError("make_state: non-finite moment entries");
  }
  GaussianState s;
  s.d = d;
  s.sigma = 0.5 * (sigma + sigma.transpose());
  s.ordering = ordering;
  auto rep = validate_covariance(s.sigma, ordering);
  if (!rep.is_physical) {
    throw NotPhysicalError("make_state: uncertainty relation violated, min symplectic eigenvalue " +
                           std::to_string(rep.symplectic_eigenvalues[1]));
  }
  return s;
}

GaussianState convert_ordering(const GaussianState& state, ModeOrdering target) {
  if (state.ordering == target) return state;
  const auto& perm = ordering_permutation();
  GaussianState out;
  out.ordering = target;
  // The permutation is its own inverse, so the same index map works both ways.
  for (int i = 0; i < 4; ++i) {
    out.d(perm[i]) = state.d(i);
    for (int j = 0; j < 4; ++j) out.sigma(perm[i], perm[j]) = state.sigma(i, j);
  }
  return out;
}

PhysicalityReport validate_covariance(const Mat4& sigma, ModeOrdering ordering) {
  if (!all_finite(sigma)) {
    throw NonFiniteError("validate_covariance: NaN or infinite entry");
  }
  PhysicalityReport rep;
  rep.symmetry_defect = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();

  const Mat4 sym = 0.5 * (sigma + sigma.transpose());
  const Mat4 omega = symplectic_form(ordering);
  std::array<double, 4> mods{};
  if (Eigen::SelfAdjointEigenSolver<Mat4>(sym).eigenvalues()(0) > 0.0) {
    const auto lam = hermitian_c_spectrum(sym, omega);
    for (int i = 0; i < 4; ++i) mods[i] = std::abs(lam[i]);
  } else {
    // not even positive definite; a general solver suffices for the rejection
    Eigen::EigenSolver<Mat4> es(omega * sym);
    for (int i = 0; i < 4; ++i) mods[i] = std::abs(es.eigenvalues()(i));
  }
  std::sort(mods.begin(), mods.end());
  rep.symplectic_eigenvalues = {0.5 * (mods[2] + mods[3]), 0.5 * (mods[0] + mods[1])};
  rep.min_eigen_slack = rep.symplectic_eigenvalues[1] - 1.0;
  rep.is_physical = rep.min_eigen_slack >= -kPhysicalitySlack;
  return rep;
}

std::pair<double, double> symplectic_eigenvalues(const Mat4& sigma, ModeOrdering ordering) {
  auto rep = validate_covariance(sigma, ordering);
  if (!rep.is_physical) {
    throw NotPhysicalError("symplectic_eigenvalues: input not a physical covariance");
  }
  const Mat4 sym = 0.5 * (sigma + sigma.transpose());
  const Mat4 omega = symplectic_form(ordering);

  // Trace-formula route: Lambda_{1,2} = sqrt((T +- sqrt(T^2 - 16 det)) ) / 2
  // with T = tr[C^2] = tr[-(Omega sigma)^2] and det = det sigma.
  const Mat4 os = omega * sym;
  const double trc2 = -(os * os).trace();
  const double det = sym.determinant();
  const double disc = trc2 * trc2 - 16.0 * det;
  if (disc < -1e-9 * std::max(1.0, trc2 * trc2)) {
    throw TraceFormulaBranchError("symplectic_eigenvalues: negative discriminant " +
                                  std::to_string(disc));
  }
  const double root = std::sqrt(std::max(disc, 0.0));
  const double l1 = 0.5 * std::sqrt(trc2 + root);
  const double l2 = 0.5 * std::sqrt(std::max(trc2 - root, 0.0));

  const double m1 = rep.symplectic_eigenvalues[0];
  const double m2 = rep.symplectic_eigenvalues[1];
  const double scale = std::max({1.0, l1, m1});
  // The branch radical loses half the digits at degeneracies, so the
  // per-branch comparison carries a sqrt(eps) allowance; the branch sum has no
  // such cancellation and is held to 1e-10.
  const double branch_tol =
      1e-10 * scale + 8.0 * std::sqrt(std::numeric_limits<double>::epsilon()) * scale;
  if (std::abs((l1 + l2) - (m1 + m2)) > 1e-10 * scale || std::abs(l1 - m1) > branch_tol ||
      std::abs(l2 - m2) > branch_tol) {
    throw TraceFormulaBranchError("symplectic_eigenvalues: trace formula and spectral route disagree");
  }
  // Hermitian-route values are the accurate ones near crossings.
  return {m1, m2};
}

std::array<double, 4> c_matrix_eigenvalues(const Mat4& sigma, ModeOrdering ordering) {
  auto rep = validate_covariance(sigma, ordering);
  if (!rep.is_physical) {
    throw NotPhysicalError("c_matrix_eigenvalues: input not a physical covariance");
  }
  const Mat4 sym = 0.5 * (sigma + sigma.transpose());
  const Mat4 omega = symplectic_form(ordering);

  // C = i Omega sigma is similar to the Hermitian sigma^{1/2} (i Omega) sigma^{1/2},
  // so its spectrum is real and comes from a self-adjoint solve. A cross-check
  // against the general solver bounds the imaginary residue.
  const auto lam = hermitian_c_spectrum(sym, omega);
  {
    Eigen::EigenSolver<Mat4> es(omega * sym);
    double residue = 0.0;
    for (int i = 0; i < 4; ++i) {
      double best = 1e300;
      for (int j = 0; j < 4; ++j) {
        best = std::min(best, std::abs(es.eigenvalues()(i) -
                                       std::complex<double>(0.0, -1.0) *
                                           std::complex<double>(lam[j], 0.0)));
      }
      residue = std::max(residue, best);
    }
    const double scale = std::max(1.0, std::abs(lam[3]));
    if (residue > 1e-7 * scale) {
      throw ComplexSpectrumError("c_matrix_eigenvalues: spectral routes disagree by " +
                                 std::to_string(residue));
    }
  }
  const double scale = std::max(1.0, std::abs(lam[3]));
  if (std::abs(lam[0] + lam[3]) > 1e-10 * scale || std::abs(lam[1] + lam[2]) > 1e-10 * scale) {
    throw ComplexSpectrumError("c_matrix_eigenvalues: spectrum not +/- paired");
  }
  return lam;
}

SingleModeState partial_trace(const GaussianState& state, int keep_mode) {
  if (keep_mode != 1 && keep_mode != 2) {
    throw UnknownParameterError("partial_trace: keep_mode must be 1 or 2");
  }
  const GaussianState s = convert_ordering(state, ModeOrdering::QQPP);
  auto rep = validate_covariance(s.sigma, s.ordering);
  if (!rep.is_physical) {
    throw NotPhysicalError("partial_trace: input not physical");
  }
  const int q = keep_mode - 1;      // q index in QQPP
  const int p = keep_mode - 1 + 2;  // p index in QQPP
  SingleModeState out;
  out.d << s.d(q), s.d(p);
  out.sigma << s.sigma(q, q), s.sigma(q, p), s.sigma(p, q), s.sigma(p, p);
  return out;
}

double wigner_at(const GaussianState& state, const Vec4& x) {
  auto rep = validate_covariance(state.sigma, state.ordering);
  if (!rep.is_physical) {
    throw NotPhysicalError("wigner_at: input not physical");
  }
  const Vec4 dx = x - state.d;
  const double quad = dx.dot(state.sigma.ldlt().solve(dx));
  const double det = state.sigma.determinant();
  // Two-mode normalization (2 pi)^2 sqrt(det sigma) in these units.
  return std::exp(-0.5 * quad) / ((2.0 * kPi) * (2.0 * kPi) * std::sqrt(det));
}

}  // namespace gqfi
