#include "gqfi/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace gqfi {

namespace {

constexpr double kPi = 3.14159265358979323846;

double branch_gap_at(const ProbeParams& fixed, Parameter id, double x, CovarianceModel model) {
  const ProbeParams p = with_parameter(fixed, id, x);
  const auto lam = symplectic_eigenvalues(probe_sigma(p, model));
  return lam.first - lam.second;
}

// Golden-section minimization of the branch gap, used to refine crossing locations.
double refine_gap_minimum(const ProbeParams& fixed, Parameter id, double lo, double hi,
                          CovarianceModel model) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = branch_gap_at(fixed, id, c, model);
  double fd = branch_gap_at(fixed, id, d, model);
  for (int it = 0; it < 80 && (b - a) > 1e-12 * std::max(1.0, std::abs(b)); ++it) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = branch_gap_at(fixed, id, c, model);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = branch_gap_at(fixed, id, d, model);
    }
  }
  return 0.5 * (a + b);
}

SpectrumTable spectrum_trace_impl(const ProbeParams& fixed, const Axis& axis,
                                  CovarianceModel model, bool parallel) {
  validate_axis(axis);
  SpectrumTable table;
  table.axis = axis;
  table.rows.resize(axis.count);

#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < axis.count; ++i) {
    const double x = axis.at(i);
    const ProbeParams p = with_parameter(fixed, axis.id, x);
    const Mat4 sigma = probe_sigma(p, model);
    SpectrumRow row;
    row.x = x;
    row.lambda = c_matrix_eigenvalues(sigma);
    const auto lam = symplectic_eigenvalues(sigma);
    row.branch_gap = lam.first - lam.second;
    table.rows[i] = row;
  }

  // Crossing detector: refine local minima of the branch gap and keep those
  // that close to within 1e-6. Adjacent hits (degenerate plateaus) collapse to
  // the location with the smallest gap.
  std::vector<double> hits;
  for (int i = 1; i + 1 < axis.count; ++i) {
    const double g = table.rows[i].branch_gap;
    if (g <= table.rows[i - 1].branch_gap && g <= table.rows[i + 1].branch_gap) {
      const double loc = refine_gap_minimum(fixed, axis.id, table.rows[i - 1].x,
                                            table.rows[i + 1].x, model);
      if (branch_gap_at(fixed, axis.id, loc, model) <= 1e-6) {
        hits.push_back(loc);
      }
    }
  }
  const double step_width = (axis.hi - axis.lo) / (axis.count - 1);
  for (size_t k = 0; k < hits.size();) {
    size_t end = k + 1;
    while (end < hits.size() && hits[end] - hits[end - 1] <= 1.5 * step_width) ++end;
    double best = hits[k];
    double best_gap = branch_gap_at(fixed, axis.id, best, model);
    for (size_t j = k + 1; j < end; ++j) {
      const double g = branch_gap_at(fixed, axis.id, hits[j], model);
      if (g < best_gap) {
        best = hits[j];
        best_gap = g;
      }
    }
    table.crossings.push_back(best);
    k = end;
  }
  return table;
}

}  // namespace

void validate_axis(const Axis& axis) {
  if (!(axis.count >= 2)) throw UnknownParameterError("axis: count must be >= 2");
  if (!(axis.lo < axis.hi)) throw UnknownParameterError("axis: min must be < max");
  if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi)) {
    throw NonFiniteError("axis: bounds must be finite");
  }
}

SpectrumTable spectrum_trace(const ProbeParams& fixed, const Axis& axis,
                             CovarianceModel model) {
  return spectrum_trace_impl(fixed, axis, model, true);
}

SpectrumTable spectrum_trace_serial(const ProbeParams& fixed, const Axis& axis,
                                    CovarianceModel model) {
  return spectrum_trace_impl(fixed, axis, model, false);
}

LimitingCase parse_limiting_case(const std::string& name) {
  if (name == "r0") return LimitingCase::R0;
  if (name == "r_large") return LimitingCase::RLarge;
  if (name == "phi0") return LimitingCase::Phi0;
  if (name == "phi_half_pi") return LimitingCase::PhiHalfPi;
  if (name == "balanced") return LimitingCase::Balanced;
  throw UnknownParameterError("unknown limiting case '" + name + "'");
}

std::string limiting_case_name(LimitingCase c) {
  switch (c) {
    case LimitingCase::R0: return "r0";
    case LimitingCase::RLarge: return "r_large";
    case LimitingCase::Phi0: return "phi0";
    case LimitingCase::PhiHalfPi: return "phi_half_pi";
    case LimitingCase::Balanced: return "balanced";
  }
  return "?";
}

namespace {

// Maps the printed pair +-i sqrt(z) to real eigenvalues: real exactly when z
// is a negative real, in which case the pair is +-sqrt(-z).
bool map_radical(std::complex<double> z, double scale, double* out) {
  if (std::abs(z.imag()) > 1e-9 * std::max(1.0, scale)) return false;
  if (z.real() > 1e-9 * std::max(1.0, scale)) return false;
  *out = std::sqrt(std::max(-z.real(), 0.0));
  return true;
}

}  // namespace

LimitingCaseReport limiting_case_eigenvalues(LimitingCase which, const ProbeParams& p) {
  validate_params(p);
  const double delta = p.delta();
  const double tot1 = 1.0 + p.total();
  const double c2 = std::cos(2.0 * p.phi), s2 = std::sin(2.0 * p.phi);
  const double ch = std::cosh(2.0 * p.r), sh = std::sinh(2.0 * p.r);

  std::complex<double> za, zb;
  switch (which) {
    case LimitingCase::R0: {
      if (std::abs(p.r) > 1e-12) throw CaseMismatchError("limiting case r0 requires r = 0");
      const std::complex<double> a = -delta * delta * c2 * c2 - tot1 * tot1;
      const std::complex<double> b = std::sqrt(std::complex<double>(
          4.0 * delta * delta * tot1 * tot1 * c2 * c2 -
          delta * delta * s2 * s2 * (tot1 * tot1 - delta * delta * c2 * c2)));
      za = a - b;
      zb = a + b;
      break;
    }
    case LimitingCase::Phi0:
    case LimitingCase::PhiHalfPi: {
      const double target = (which == LimitingCase::Phi0) ? 0.0 : 0.5 * kPi;
      if (std::abs(p.phi - target) > 1e-12) {
        throw CaseMismatchError("limiting case " + limiting_case_name(which) +
                                " requires phi = " + std::to_string(target));
      }
      const std::complex<double> f = -delta * delta - tot1 * tot1 * ch * ch;
      const std::complex<double> g =
          tot1 * std::sqrt(std::complex<double>(ch * ch * sh * sh +
                                                4.0 * delta * delta * ch * ch -
                                                delta * delta * sh * sh));
      za = f - g;
      zb = f + g;
      break;
    }
    case LimitingCase::Balanced: {
      if (std::abs(delta) > 1e-9) {
        throw CaseMismatchError("limiting case balanced requires nbar = mbar");
      }
      const std::complex<double> j = sh * sh * s2 * s2 - ch * ch;
      const std::complex<double> k =
          c2 * sh * std::sqrt(std::complex<double>(ch * ch - sh * sh * s2 * s2));
      za = j - k;
      zb = j + k;
      break;
    }
    case LimitingCase::RLarge: {
      if (p.r < 2.0) throw CaseMismatchError("limiting case r_large requires r >= 2");
      // Printed asymptote: two zero eigenvalues and +-(1/sqrt 2) e^{2R}(1+S)cos(2phi).
      const double big = std::exp(2.0 * p.r) * tot1 * c2 / std::sqrt(2.0);
      LimitingCaseReport rep;
      rep.which = which;
      rep.mappable = true;
      rep.printed = {-std::abs(big), 0.0, 0.0, std::abs(big)};
      rep.numeric_tabulated = c_matrix_eigenvalues(probe_sigma(p, CovarianceModel::Tabulated));
      rep.numeric_conjugated =
          c_matrix_eigenvalues(probe_sigma(p, CovarianceModel::Conjugated));
      for (int i = 0; i < 4; ++i) {
        rep.dev_tabulated =
            std::max(rep.dev_tabulated, std::abs(rep.printed[i] - rep.numeric_tabulated[i]));
        rep.dev_conjugated =
            std::max(rep.dev_conjugated, std::abs(rep.printed[i] - rep.numeric_conjugated[i]));
      }
      return rep;
    }
  }

  LimitingCaseReport rep;
  rep.which = which;
  const double scale = std::max(std::abs(za), std::abs(zb));
  double la = 0.0, lb = 0.0;
  rep.mappable = map_radical(za, scale, &la) && map_radical(zb, scale, &lb);
  if (rep.mappable) {
    std::array<double, 4> lam{-lb, -la, la, lb};
    std::sort(lam.begin(), lam.end());
    rep.printed = lam;
  }
  rep.numeric_tabulated = c_matrix_eigenvalues(probe_sigma(p, CovarianceModel::Tabulated));
  rep.numeric_conjugated = c_matrix_eigenvalues(probe_sigma(p, CovarianceModel::Conjugated));
  if (rep.mappable) {
    for (int i = 0; i < 4; ++i) {
      rep.dev_tabulated =
          std::max(rep.dev_tabulated, std::abs(rep.printed[i] - rep.numeric_tabulated[i]));
      rep.dev_conjugated =
          std::max(rep.dev_conjugated, std::abs(rep.printed[i] - rep.numeric_conjugated[i]));
    }
  } else {
    rep.dev_tabulated = rep.dev_conjugated = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

void validate_spec(const SweepSpec& spec) {
  validate_params(spec.fixed);
  validate_axis(spec.vary_x);
  if (spec.vary_y) validate_axis(*spec.vary_y);
}

namespace {

bool in_guard_band(double phi, double width) {
  return std::abs(phi - 0.25 * kPi) < width || std::abs(phi - 0.75 * kPi) < width;
}

SweepCell evaluate_cell(const SweepSpec& spec, int ix, int iy) {
  SweepCell cell;
  cell.ix = ix;
  cell.iy = iy;
  cell.x = spec.vary_x.at(ix);
  cell.y = spec.vary_y ? spec.vary_y->at(iy) : 0.0;

  ProbeParams p = with_parameter(spec.fixed, spec.vary_x.id, cell.x);
  if (spec.vary_y) p = with_parameter(p, spec.vary_y->id, cell.y);

  QfiEngine engine = spec.engine;
  if (engine == QfiEngine::EigenForm && in_guard_band(p.phi, spec.guard_band)) {
    engine = QfiEngine::FidelityLimit;
    cell.flags.fallback = true;
  }

  try {
    const QfiResult res = qfi_by_engine(engine, p, spec.which, spec.model);
    cell.value = res.value;
    cell.engine_used = engine;
    cell.flags.near_pure = res.flags.near_pure;
    cell.flags.near_degenerate = res.flags.near_degenerate;
    cell.flags.step_limited = res.flags.step_limited;
  } catch (const Error&) {
    try {
      const QfiResult res = qfi_fidelity_limit(p, spec.which, spec.model);
      cell.value = res.value;
      cell.engine_used = QfiEngine::FidelityLimit;
      cell.flags = res.flags;
      cell.flags.fallback = true;
    } catch (const Error&) {
      cell.failed = true;
      cell.value = std::numeric_limits<double>::quiet_NaN();
      cell.flags.fallback = true;
    }
  }

  if (spec.emit_reduced_thermometry && spec.which == Parameter::Nbar) {
    try {
      cell.reduced_value = thermometry_qfi(p, ThermometryVariant::Reduced).value;
    } catch (const Error&) {
      cell.reduced_value = std::numeric_limits<double>::quiet_NaN();
    }
  }
  if (spec.emit_spectrum) {
    cell.lambda = c_matrix_eigenvalues(probe_sigma(p, spec.model));
  }
  return cell;
}

SweepTable qfi_sweep_impl(const SweepSpec& spec, bool parallel) {
  validate_spec(spec);
  SweepTable table;
  table.spec = spec;
  const int nx = spec.vary_x.count;
  const int ny = spec.vary_y ? spec.vary_y->count : 1;
  table.cells.resize(static_cast<size_t>(nx) * ny);

#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (int idx = 0; idx < nx * ny; ++idx) {
    const int iy = idx / nx;
    const int ix = idx % nx;
    table.cells[idx] = evaluate_cell(spec, ix, iy);
  }
  return table;
}

}  // namespace

SweepTable qfi_sweep(const SweepSpec& spec) { return qfi_sweep_impl(spec, true); }
SweepTable qfi_sweep_serial(const SweepSpec& spec) { return qfi_sweep_impl(spec, false); }

QfiResult thermometry_qfi(const ProbeParams& p, ThermometryVariant variant, double step) {
  validate_params(p);
  if (variant == ThermometryVariant::Full) {
    // Closed form is exact here; the fidelity limit covers near-pure inputs.
    try {
      QfiResult res = qfi_closed_form(p, Parameter::Nbar, CovarianceModel::Conjugated);
      res.engine = QfiEngine::ClosedForm;
      return res;
    } catch (const PureStateSingularityError&) {
      return qfi_fidelity_limit(p, Parameter::Nbar, CovarianceModel::Conjugated, step);
    }
  }
  // Reduced: single-mode fidelity limit on the mode-1 marginal, with the same
  // signal-floor step widening as the two-mode engine.
  auto reduced = [&p](double nbar) {
    return partial_trace(build_probe({nbar, p.mbar, p.r, p.phi}), 1);
  };
  auto signal_at = [&](double s) {
    const double f =
        uhlmann_fidelity_single_mode(reduced(p.nbar - 0.5 * s), reduced(p.nbar + 0.5 * s));
    return 1.0 - std::sqrt(f);
  };
  QfiResult res;
  res.engine = QfiEngine::FidelityLimit;
  double s = step;
  if (p.nbar - 0.5 * s < 0.0) s = std::min(2.0 * p.nbar, 1e-2);
  if (!(s > 0.0)) throw StepTooSmallError("thermometry_qfi: nbar too close to zero");
  const SingleModeState sm = reduced(p.nbar);
  const double purity_gap = sm.sigma.determinant() - 1.0;
  if (purity_gap < 1e-9) {
    // Pure marginal: plain wide stencil, as in the two-mode engine.
    s = std::min(1e-2, 2.0 * p.nbar);
    res.flags.step_limited = true;
    res.value = std::max(8.0 * signal_at(s) / (s * s), 0.0);
    return res;
  }
  double coarse = signal_at(s);
  while (coarse < 1e-7 && coarse > 0.0 && s < 1e-2 && p.nbar - 0.5 * std::sqrt(10.0) * s >= 0.0) {
    s = std::min(s * std::sqrt(10.0), 1e-2);
    res.flags.step_limited = true;
    coarse = signal_at(s);
  }
  const double fine = signal_at(0.5 * s);
  const double q_coarse = 8.0 * coarse / (s * s);
  const double q_fine = 8.0 * fine / (0.25 * s * s);
  res.value = std::max((4.0 * q_fine - q_coarse) / 3.0, 0.0);
  return res;
}

ArgmaxResult argmax_scan(const std::vector<double>& xs, const std::vector<double>& values) {
  if (xs.size() != values.size() || xs.size() < 3) {
    throw FlatTableError("argmax_scan: need at least 3 points");
  }
  const double vmax = *std::max_element(values.begin(), values.end());
  const double vmin = *std::min_element(values.begin(), values.end());
  if (vmax - vmin < 1e-14) {
    throw FlatTableError("argmax_scan: table is flat");
  }
  // Ties break toward the smaller axis value.
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best] * (1.0 + 1e-9) + 1e-300) best = i;
  }

  ArgmaxResult out;
  out.grid_location = xs[best];
  out.grid_value = values[best];
  out.location = xs[best];
  out.value = values[best];
  if (best > 0 && best + 1 < values.size()) {
    const double x0 = xs[best - 1], x1 = xs[best], x2 = xs[best + 1];
    const double y0 = values[best - 1], y1 = values[best], y2 = values[best + 1];
    const double denom = (y0 - 2.0 * y1 + y2);
    if (std::abs(denom) > 1e-300) {
      const double h = x1 - x0;
      double shift = 0.5 * h * (y0 - y2) / denom;
      shift = std::clamp(shift, -(x1 - x0), x2 - x1);
      out.location = x1 + shift;
      out.value = y1 - 0.25 * (y0 - y2) * shift / h;
    }
  }
  return out;
}

namespace {

std::vector<Preset> build_presets() {
  std::vector<Preset> presets;

  auto spectrum_preset = [](std::string name, ProbeParams fixed, Axis axis,
                            std::optional<Axis> outer) {
    Preset pr;
    pr.name = std::move(name);
    pr.kind = PresetKind::Spectrum;
    pr.fixed = fixed;
    pr.axis = axis;
    pr.outer = outer;
    return pr;
  };
  auto qfi_preset = [](std::string name, SweepSpec spec, PresetKind kind = PresetKind::Qfi) {
    Preset pr;
    pr.name = std::move(name);
    pr.kind = kind;
    pr.sweep = std::move(spec);
    return pr;
  };

  presets.push_back(spectrum_preset("fig2a", {1.0, 1.0, 0.5, 0.0},
                                    {Parameter::Phi, 0.0, kPi, 400}, std::nullopt));
  presets.push_back(spectrum_preset("fig2b", {1.0, 1.0, 0.0, 0.25 * kPi},
                                    {Parameter::R, 0.0, 1.0, 401},
                                    Axis{Parameter::Phi, 0.25 * kPi, 0.5 * kPi, 2}));
  presets.push_back(spectrum_preset("fig6a", {1.0, 1.0, 0.0, 0.0},
                                    {Parameter::Phi, 0.0, kPi, 81},
                                    Axis{Parameter::R, 0.0, 1.0, 41}));
  presets.push_back(spectrum_preset("fig6b", {1.0, 10.0, 0.0, 0.0},
                                    {Parameter::Phi, 0.0, kPi, 81},
                                    Axis{Parameter::R, 0.0, 1.0, 41}));

  SweepSpec fig3;
  fig3.fixed = {1.0, 1.0, 0.0, 0.0};
  fig3.vary_x = {Parameter::Phi, 0.0, kPi, 81};
  fig3.vary_y = Axis{Parameter::R, 0.0, 0.5, 26};
  fig3.which = Parameter::Phi;
  fig3.engine = QfiEngine::ClosedForm;
  fig3.model = CovarianceModel::Tabulated;
  presets.push_back(qfi_preset("fig3a", fig3));
  fig3.fixed.mbar = 20.0;
  presets.push_back(qfi_preset("fig3b", fig3));

  SweepSpec fig4 = fig3;
  fig4.fixed = {1.0, 1.0, 0.0, 0.0};
  fig4.which = Parameter::R;
  presets.push_back(qfi_preset("fig4a", fig4));
  fig4.fixed.mbar = 20.0;
  presets.push_back(qfi_preset("fig4b", fig4));

  SweepSpec fig5a;
  fig5a.fixed = {1.0, 1.0, 0.0, 0.0};
  fig5a.vary_x = {Parameter::Phi, 0.0, kPi, 81};
  fig5a.vary_y = Axis{Parameter::Nbar, 0.1, 3.0, 30};
  fig5a.which = Parameter::Nbar;
  fig5a.engine = QfiEngine::FidelityLimit;
  fig5a.model = CovarianceModel::Conjugated;
  fig5a.emit_reduced_thermometry = true;
  presets.push_back(qfi_preset("fig5a", fig5a, PresetKind::Thermometry));

  SweepSpec fig5b = fig5a;
  fig5b.vary_x = {Parameter::R, 0.0, 1.0, 41};
  fig5b.fixed.phi = 0.0;
  presets.push_back(qfi_preset("fig5b", fig5b, PresetKind::Thermometry));

  return presets;
}

}  // namespace

const std::vector<Preset>& figure_presets() {
  static const std::vector<Preset> presets = build_presets();
  return presets;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : figure_presets()) {
    if (p.name == name) return p;
  }
  throw UnknownParameterError("unknown preset '" + name + "'");
}

}  // namespace gqfi
