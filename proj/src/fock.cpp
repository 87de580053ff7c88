#include "gqfi/fock.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace gqfi {

namespace {

using MatXc = Eigen::MatrixXcd;
using VecX = Eigen::VectorXd;
constexpr std::complex<double> kI{0.0, 1.0};

MatXc ladder(int d) {
  MatXc a = MatXc::Zero(d, d);
  for (int k = 1; k < d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

MatXc kron(const MatXc& a, const MatXc& b) {
  const int n = static_cast<int>(a.rows()), m = static_cast<int>(b.rows());
  MatXc out(n * m, n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.block(i * m, j * m, m, m) = a(i, j) * b;
  return out;
}

struct GeneratorEig {
  MatXc vectors;
  VecX values;  // of the Hermitian i*K
};

// Eigendecompositions of the Hermitian generators, cached per (kind, cutoff).
const GeneratorEig& generator_eig(FockUnitaryKind kind, int cutoff) {
  static std::map<std::pair<int, int>, GeneratorEig> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  const auto key = std::make_pair(static_cast<int>(kind), cutoff);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const MatXc a = ladder(cutoff);
  const MatXc id = MatXc::Identity(cutoff, cutoff);
  const MatXc a1 = kron(a, id);
  const MatXc a2 = kron(id, a);
  MatXc k;
  if (kind == FockUnitaryKind::BeamSplitter) {
    k = a1.adjoint() * a2 - a1 * a2.adjoint();
  } else {
    k = a1.adjoint() * a2.adjoint() - a1 * a2;
  }
  const MatXc h = kI * k;
  Eigen::SelfAdjointEigenSolver<MatXc> es(h);
  GeneratorEig g{es.eigenvectors(), es.eigenvalues()};
  return cache.emplace(key, std::move(g)).first->second;
}

VecX thermal_weights(double nbar, int d) {
  VecX w = VecX::Zero(d);
  if (nbar <= 0.0) {
    w(0) = 1.0;
    return w;
  }
  const double q = nbar / (nbar + 1.0);
  double acc = 1.0 / (nbar + 1.0);
  for (int n = 0; n < d; ++n) {
    w(n) = acc;
    acc *= q;
  }
  return w;
}

VecX probe_input_weights(const ProbeParams& p, int cutoff) {
  const VecX wn = thermal_weights(p.nbar, cutoff);
  const VecX wm = thermal_weights(p.mbar, cutoff);
  VecX w(cutoff * cutoff);
  for (int n1 = 0; n1 < cutoff; ++n1)
    for (int n2 = 0; n2 < cutoff; ++n2) w(n1 * cutoff + n2) = wn(n1) * wm(n2);
  return w;
}

MatXc probe_unitary(const ProbeParams& p, int cutoff) {
  const auto& gb = generator_eig(FockUnitaryKind::BeamSplitter, cutoff);
  const auto& gs = generator_eig(FockUnitaryKind::Squeezer, cutoff);
  const MatXc b =
      gb.vectors * (-kI * p.phi * gb.values.array()).exp().matrix().asDiagonal() *
      gb.vectors.adjoint();
  const MatXc s =
      gs.vectors * (-kI * p.r * gs.values.array()).exp().matrix().asDiagonal() *
      gs.vectors.adjoint();
  return b * s;
}

double sum_sqrt_clipped(const VecX& ev) {
  double acc = 0.0;
  for (int i = 0; i < ev.size(); ++i) acc += std::sqrt(std::max(ev(i), 0.0));
  return acc;
}

// Fidelity of U1 w1 U1+ vs U2 w2 U2+ using the known factorizations: the inner
// eigenproblem reduces to sqrt(w1) W w2 W+ sqrt(w1) with W = U1+ U2.
double factored_fidelity(const VecX& w1, const MatXc& u1, const VecX& w2, const MatXc& u2) {
  const MatXc w = u1.adjoint() * u2;
  const VecX r1 = w1.cwiseMax(0.0).cwiseSqrt();
  const VecX r2 = w2.cwiseMax(0.0).cwiseSqrt();
  const MatXc y = r1.asDiagonal() * w * r2.asDiagonal();
  const MatXc m = y * y.adjoint();
  Eigen::SelfAdjointEigenSolver<MatXc> es(m, Eigen::EigenvaluesOnly);
  const double root_sum = sum_sqrt_clipped(es.eigenvalues());
  return root_sum * root_sum;
}

double probe_pair_fidelity(const ProbeParams& a, const ProbeParams& b, int cutoff) {
  const VecX wa = probe_input_weights(a, cutoff);
  const VecX wb = probe_input_weights(b, cutoff);
  if (a.phi == b.phi && a.r == b.r) {
    // Same unitary, diagonal inputs: the fidelity is the thermal overlap.
    double acc = 0.0;
    for (int i = 0; i < wa.size(); ++i) acc += std::sqrt(std::max(wa(i) * wb(i), 0.0));
    return acc * acc;
  }
  const MatXc ua = probe_unitary(a, cutoff);
  const MatXc ub = probe_unitary(b, cutoff);
  return factored_fidelity(wa, ua, wb, ub);
}

}  // namespace

FockOperator fock_thermal(double nbar, double mbar, int cutoff, double* deficit) {
  if (cutoff < 2) throw TruncationTooSevereError("fock_thermal: cutoff must be >= 2");
  if (nbar < 0.0 || mbar < 0.0) {
    throw NegativeOccupationError("fock_thermal: negative occupation");
  }
  const VecX w = probe_input_weights({nbar, mbar, 0.0, 0.0}, cutoff);
  const double def = 1.0 - w.sum();
  if (deficit) *deficit = def;
  if (def > 1e-6) {
    std::ostringstream msg;
    msg << "fock_thermal: truncation deficit " << def << " exceeds 1e-6 at cutoff " << cutoff;
    throw TruncationTooSevereError(msg.str());
  }
  FockOperator op;
  op.dim_per_mode = cutoff;
  op.matrix = w.cast<std::complex<double>>().asDiagonal();
  return op;
}

FockOperator fock_unitary(FockUnitaryKind kind, double theta, int cutoff) {
  if (cutoff < 2) throw TruncationTooSevereError("fock_unitary: cutoff must be >= 2");
  const auto& g = generator_eig(kind, cutoff);
  FockOperator op;
  op.dim_per_mode = cutoff;
  op.matrix = g.vectors * (-kI * theta * g.values.array()).exp().matrix().asDiagonal() *
              g.vectors.adjoint();
  return op;
}

double unitary_defect_low_block(const FockOperator& u) {
  const int d = u.dim_per_mode;
  const MatXc defect = u.matrix.adjoint() * u.matrix - MatXc::Identity(d * d, d * d);
  double worst = 0.0;
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n2 < d; ++n2) {
      if (n1 + n2 > d / 2) continue;
      for (int m1 = 0; m1 < d; ++m1)
        for (int m2 = 0; m2 < d; ++m2) {
          if (m1 + m2 > d / 2) continue;
          worst = std::max(worst, std::abs(defect(n1 * d + n2, m1 * d + m2)));
        }
    }
  return worst;
}

FockOperator fock_probe(const ProbeParams& p, int cutoff) {
  validate_params(p);
  double deficit = 0.0;
  const FockOperator rho0 = fock_thermal(p.nbar, p.mbar, cutoff, &deficit);
  const MatXc u = probe_unitary(p, cutoff);
  FockOperator out;
  out.dim_per_mode = cutoff;
  out.matrix = u * rho0.matrix * u.adjoint();
  return out;
}

double fock_fidelity(const FockOperator& rho1, const FockOperator& rho2) {
  if (rho1.dim_per_mode != rho2.dim_per_mode) {
    throw OrderingMismatchError("fock_fidelity: cutoff mismatch");
  }
  Eigen::SelfAdjointEigenSolver<MatXc> es1(rho1.matrix);
  const VecX ev1 = es1.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const MatXc root1 =
      es1.eigenvectors() * ev1.cast<std::complex<double>>().asDiagonal() *
      es1.eigenvectors().adjoint();
  const MatXc inner = root1 * rho2.matrix * root1;
  Eigen::SelfAdjointEigenSolver<MatXc> es2(inner, Eigen::EigenvaluesOnly);
  const double root_sum = sum_sqrt_clipped(es2.eigenvalues());
  return root_sum * root_sum;
}

double fock_probe_fidelity(const ProbeParams& a, const ProbeParams& b, int cutoff,
                           bool check_convergence) {
  const double value = probe_pair_fidelity(a, b, cutoff);
  if (check_convergence) {
    const double prev = probe_pair_fidelity(a, b, cutoff - 5);
    if (std::abs(value - prev) >= 1e-5) {
      std::ostringstream msg;
      msg << "fock_probe_fidelity: not converged, F(" << cutoff - 5 << ") = " << prev
          << ", F(" << cutoff << ") = " << value;
      throw NotConvergedError(msg.str());
    }
  }
  return value;
}

double fock_qfi(const ProbeParams& p, Parameter which, double step, int cutoff) {
  validate_params(p);
  if (!(step >= 1e-5 && step <= 1e-2)) {
    throw StepTooSmallError("fock_qfi: step must lie in [1e-5, 1e-2]");
  }
  auto shift = [&](double delta) {
    ProbeParams q = p;
    switch (which) {
      case Parameter::Phi: q.phi += delta; break;
      case Parameter::R: q.r += delta; break;
      case Parameter::Nbar: q.nbar += delta; break;
      case Parameter::Mbar: q.mbar += delta; break;
    }
    return q;
  };
  // Truncation leaves a small step-independent loss in F; the base-point
  // fidelity F(theta, theta) measures that floor so the stencil can remove it.
  const double floor = 1.0 - std::sqrt(std::min(probe_pair_fidelity(p, p, cutoff), 1.0));
  auto eval = [&](double s) {
    const double f = probe_pair_fidelity(shift(-0.5 * s), shift(0.5 * s), cutoff);
    const double signal = (1.0 - std::sqrt(std::min(f, 1.0))) - floor;
    return 8.0 * std::max(signal, 0.0) / (s * s);
  };
  const double coarse = eval(step);
  const double fine = eval(0.5 * step);
  const double rich = (4.0 * fine - coarse) / 3.0;
  if (std::abs(fine - coarse) > 0.5 * std::max({std::abs(fine), std::abs(coarse), 1e-5})) {
    std::ostringstream msg;
    msg << "fock_qfi: stencil estimates inconsistent (" << coarse << " vs " << fine << ")";
    throw NotConvergedError(msg.str());
  }
  return std::max(rich, 0.0);
}

Mat4 fock_covariance(const FockOperator& rho) {
  const int d = rho.dim_per_mode;
  const MatXc a = ladder(d);
  const MatXc id = MatXc::Identity(d, d);
  const MatXc a1 = kron(a, id);
  const MatXc a2 = kron(id, a);
  const MatXc xs[4] = {a1 + a1.adjoint(), a2 + a2.adjoint(),
                       kI * (a1.adjoint() - a1), kI * (a2.adjoint() - a2)};
  Vec4 mean;
  for (int i = 0; i < 4; ++i) mean(i) = (rho.matrix * xs[i]).trace().real();
  Mat4 sigma;
  for (int i = 0; i < 4; ++i) {
    const MatXc rx = rho.matrix * xs[i];
    for (int j = i; j < 4; ++j) {
      const double second = 0.5 * ((rx * xs[j]).trace() + (rho.matrix * xs[j] * xs[i]).trace()).real();
      sigma(i, j) = sigma(j, i) = second - mean(i) * mean(j);
    }
  }
  return sigma;
}

double fock_mean_photon(const FockOperator& rho, int mode) {
  const int d = rho.dim_per_mode;
  double acc = 0.0;
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n2 < d; ++n2) {
      const double occ = (mode == 1) ? n1 : n2;
      acc += occ * rho.matrix(n1 * d + n2, n1 * d + n2).real();
    }
  return acc;
}

}  // namespace gqfi
