#include "gqfi/channels.hpp"

#include <cmath>

namespace gqfi {

namespace {

Mat4 block_diag(const Mat2& a, const Mat2& b) {
  Mat4 m = Mat4::Zero();
  m.block<2, 2>(0, 0) = a;
  m.block<2, 2>(2, 2) = b;
  return m;
}

Mat2 rotation(double phi) {
  Mat2 r;
  r << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
  return r;
}

}  // namespace

void validate_params(const ProbeParams& p) {
  if (!std::isfinite(p.nbar) || !std::isfinite(p.mbar) || !std::isfinite(p.r) ||
      !std::isfinite(p.phi)) {
    throw NonFiniteError("probe parameters must be finite");
  }
  if (p.nbar < 0.0 || p.mbar < 0.0) {
    throw NegativeOccupationError("thermal occupations must be nonnegative");
  }
  if (p.r < 0.0) {
    throw ParameterTooLargeError("squeezing strength must be nonnegative");
  }
  if (p.r > 300.0) {
    throw ParameterTooLargeError("squeezing strength too large for double precision");
  }
}

Parameter parse_parameter(const std::string& name) {
  if (name == "phi") return Parameter::Phi;
  if (name == "r" || name == "R") return Parameter::R;
  if (name == "nbar") return Parameter::Nbar;
  if (name == "mbar") return Parameter::Mbar;
  throw UnknownParameterError("unknown parameter '" + name + "' (expected phi, r, nbar, mbar)");
}

std::string parameter_name(Parameter p) {
  switch (p) {
    case Parameter::Phi: return "phi";
    case Parameter::R: return "r";
    case Parameter::Nbar: return "nbar";
    case Parameter::Mbar: return "mbar";
  }
  return "?";
}

std::string covariance_model_name(CovarianceModel m) {
  return m == CovarianceModel::Conjugated ? "conjugated" : "tabulated";
}

double symplectic_defect(const SymplecticMatrix& m) {
  const Mat4 omega = symplectic_form(m.ordering);
  return (m.m * omega * m.m.transpose() - omega).cwiseAbs().maxCoeff();
}

SymplecticMatrix beam_splitter(double phi) {
  if (!std::isfinite(phi)) throw NonFiniteError("beam_splitter: phi must be finite");
  // Passive rotation acting identically on the q and the p pair.
  const Mat2 rot = rotation(phi);
  return {block_diag(rot, rot), ModeOrdering::QQPP};
}

SymplecticMatrix two_mode_squeezer(double r) {
  if (!std::isfinite(r)) throw NonFiniteError("two_mode_squeezer: r must be finite");
  if (std::abs(r) > 300.0) {
    throw ParameterTooLargeError("two_mode_squeezer: cosh overflows for |r| > 300");
  }
  const double ch = std::cosh(r), sh = std::sinh(r);
  Mat2 qblock, pblock;
  qblock << ch, sh, sh, ch;
  pblock << ch, -sh, -sh, ch;
  return {block_diag(qblock, pblock), ModeOrdering::QQPP};
}

GaussianState thermal_state(double nbar, double mbar) {
  if (!std::isfinite(nbar) || !std::isfinite(mbar)) {
    throw NonFiniteError("thermal_state: occupations must be finite");
  }
  if (nbar < 0.0 || mbar < 0.0) {
    throw NegativeOccupationError("thermal_state: negative occupation");
  }
  Mat4 sigma = Mat4::Zero();
  sigma.diagonal() << 2.0 * nbar + 1.0, 2.0 * mbar + 1.0, 2.0 * nbar + 1.0, 2.0 * mbar + 1.0;
  return make_state(Vec4::Zero(), sigma, ModeOrdering::QQPP);
}

GaussianState apply_symplectic(const GaussianState& state, const SymplecticMatrix& m) {
  if (state.ordering != m.ordering) {
    throw OrderingMismatchError("apply_symplectic: state and matrix orderings differ");
  }
  // Roundoff in M Omega M^T scales with |M|^2 (cosh^2 for strong squeezers).
  const double scale = m.m.cwiseAbs().maxCoeff();
  if (symplectic_defect(m) > 1e-12 * std::max(1.0, scale * scale)) {
    throw NotSymplecticError("apply_symplectic: matrix violates M Omega M^T = Omega");
  }
  return make_state(m.m * state.d, m.m * state.sigma * m.m.transpose(), state.ordering);
}

GaussianState build_probe(const ProbeParams& p) {
  validate_params(p);
  GaussianState s = thermal_state(p.nbar, p.mbar);
  s = apply_symplectic(s, two_mode_squeezer(p.r));
  s = apply_symplectic(s, beam_splitter(p.phi));
  return s;
}

TabulatedCovariance covariance_closed_form(const ProbeParams& p) {
  validate_params(p);
  const double delta = p.delta();
  const double tot = 1.0 + p.total();
  const double c2 = std::cos(2.0 * p.phi), s2 = std::sin(2.0 * p.phi);
  const double ch = std::cosh(2.0 * p.r), sh = std::sinh(2.0 * p.r);

  TabulatedCovariance out;
  Mat4& s = out.sigma;
  s.setZero();
  s(0, 0) = -delta * c2 + tot * ch + tot * s2 * sh;
  s(0, 1) = s(1, 0) = delta * s2 + tot * c2 * sh;
  s(1, 1) = delta * c2 + tot * ch - tot * s2 * sh;
  s(2, 2) = -delta * c2 + tot * ch - tot * s2 * sh;
  s(2, 3) = s(3, 2) = 0.0;  // tabulated as zero; conjugation gives delta*s2 - tot*c2*sh
  s(3, 3) = delta * c2 + tot * ch + tot * s2 * sh;

  out.conjugated = build_probe(p).sigma;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const double dev = std::abs(s(i, j) - out.conjugated(i, j));
      out.max_discrepancy = std::max(out.max_discrepancy, dev);
      if (dev > 1e-9) out.flagged.emplace_back(i, j);
    }
  }
  return out;
}

Mat4 probe_sigma(const ProbeParams& p, CovarianceModel model) {
  if (model == CovarianceModel::Conjugated) return build_probe(p).sigma;
  validate_params(p);
  const double delta = p.delta();
  const double tot = 1.0 + p.total();
  const double c2 = std::cos(2.0 * p.phi), s2 = std::sin(2.0 * p.phi);
  const double ch = std::cosh(2.0 * p.r), sh = std::sinh(2.0 * p.r);
  Mat4 s = Mat4::Zero();
  s(0, 0) = -delta * c2 + tot * ch + tot * s2 * sh;
  s(0, 1) = s(1, 0) = delta * s2 + tot * c2 * sh;
  s(1, 1) = delta * c2 + tot * ch - tot * s2 * sh;
  s(2, 2) = -delta * c2 + tot * ch - tot * s2 * sh;
  s(3, 3) = delta * c2 + tot * ch + tot * s2 * sh;
  return s;
}

namespace {

Mat4 d_sigma_conjugated(const ProbeParams& p, Parameter which) {
  const SymplecticMatrix bs = beam_splitter(p.phi);
  const SymplecticMatrix sq = two_mode_squeezer(p.r);
  const Mat4 sigma0 = thermal_state(p.nbar, p.mbar).sigma;

  switch (which) {
    case Parameter::Phi: {
      // sigma(phi) = B kappa B^T with kappa fixed; dB/dphi = G B with constant
      // generator G = blockdiag(J, J), J = ((0,1),(-1,0)).
      Mat2 j;
      j << 0.0, 1.0, -1.0, 0.0;
      const Mat4 g = block_diag(j, j);
      const Mat4 sigma = bs.m * sq.m * sigma0 * sq.m.transpose() * bs.m.transpose();
      return g * sigma + sigma * g.transpose();
    }
    case Parameter::R: {
      // dS/dr = H S with H = blockdiag(X, -X), X = ((0,1),(1,0)).
      Mat2 x;
      x << 0.0, 1.0, 1.0, 0.0;
      const Mat4 h = block_diag(x, -x);
      const Mat4 kappa = sq.m * sigma0 * sq.m.transpose();
      const Mat4 dk = h * kappa + kappa * h.transpose();
      return bs.m * dk * bs.m.transpose();
    }
    case Parameter::Nbar:
    case Parameter::Mbar: {
      Mat4 d0 = Mat4::Zero();
      if (which == Parameter::Nbar) {
        d0.diagonal() << 2.0, 0.0, 2.0, 0.0;
      } else {
        d0.diagonal() << 0.0, 2.0, 0.0, 2.0;
      }
      const Mat4 m = bs.m * sq.m;
      return m * d0 * m.transpose();
    }
  }
  throw UnknownParameterError("d_sigma: unhandled parameter");
}

Mat4 d_sigma_tabulated(const ProbeParams& p, Parameter which) {
  const double delta = p.delta();
  const double tot = 1.0 + p.total();
  const double c2 = std::cos(2.0 * p.phi), s2 = std::sin(2.0 * p.phi);
  const double ch = std::cosh(2.0 * p.r), sh = std::sinh(2.0 * p.r);

  Mat4 d = Mat4::Zero();
  switch (which) {
    case Parameter::Phi:
      d(0, 0) = 2.0 * delta * s2 + 2.0 * tot * c2 * sh;
      d(0, 1) = d(1, 0) = 2.0 * delta * c2 - 2.0 * tot * s2 * sh;
      d(1, 1) = -2.0 * delta * s2 - 2.0 * tot * c2 * sh;
      d(2, 2) = 2.0 * delta * s2 - 2.0 * tot * c2 * sh;
      d(3, 3) = -2.0 * delta * s2 + 2.0 * tot * c2 * sh;
      return d;
    case Parameter::R:
      d(0, 0) = 2.0 * tot * (sh + s2 * ch);
      d(0, 1) = d(1, 0) = 2.0 * tot * c2 * ch;
      d(1, 1) = 2.0 * tot * (sh - s2 * ch);
      d(2, 2) = 2.0 * tot * (sh - s2 * ch);
      d(3, 3) = 2.0 * tot * (sh + s2 * ch);
      return d;
    case Parameter::Nbar:
    case Parameter::Mbar: {
      // d delta/d nbar = -1, d tot/d nbar = +1 (and +1, +1 for mbar).
      const double dd = (which == Parameter::Nbar) ? -1.0 : 1.0;
      d(0, 0) = -dd * c2 + ch + s2 * sh;
      d(0, 1) = d(1, 0) = dd * s2 + c2 * sh;
      d(1, 1) = dd * c2 + ch - s2 * sh;
      d(2, 2) = -dd * c2 + ch - s2 * sh;
      d(3, 3) = dd * c2 + ch + s2 * sh;
      return d;
    }
  }
  throw UnknownParameterError("d_sigma: unhandled parameter");
}

}  // namespace

Mat4 d_sigma(const ProbeParams& p, Parameter which, CovarianceModel model) {
  validate_params(p);
  return model == CovarianceModel::Conjugated ? d_sigma_conjugated(p, which)
                                              : d_sigma_tabulated(p, which);
}

}  // namespace gqfi
