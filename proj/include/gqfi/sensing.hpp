#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gqfi/qfi.hpp"

namespace gqfi {

struct Axis {
  Parameter id = Parameter::Phi;
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;

  double at(int i) const { return lo + (hi - lo) * static_cast<double>(i) / (count - 1); }
};

void validate_axis(const Axis& axis);

// ---------------------------------------------------------------------------
// Spectrum traces
// ---------------------------------------------------------------------------

struct SpectrumRow {
  double x = 0.0;
  std::array<double, 4> lambda{};  // ascending
  double branch_gap = 0.0;         // Lambda1 - Lambda2
};

struct SpectrumTable {
  Axis axis;
  std::vector<SpectrumRow> rows;
  std::vector<double> crossings;  // refined axis locations where branches meet
};

/// Eigenvalues of C = i Omega sigma along one parameter axis, with a crossing
/// detector that refines local gap minima and reports locations where the
/// branches meet within 1e-6.
SpectrumTable spectrum_trace(const ProbeParams& fixed, const Axis& axis,
                             CovarianceModel model = CovarianceModel::Tabulated);
SpectrumTable spectrum_trace_serial(const ProbeParams& fixed, const Axis& axis,
                                    CovarianceModel model = CovarianceModel::Tabulated);

// ---------------------------------------------------------------------------
// Limiting-case spectra
// ---------------------------------------------------------------------------

enum class LimitingCase { R0, RLarge, Phi0, PhiHalfPi, Balanced };

LimitingCase parse_limiting_case(const std::string& name);
std::string limiting_case_name(LimitingCase c);

struct LimitingCaseReport {
  LimitingCase which = LimitingCase::R0;
  bool mappable = false;                   // printed radicals gave +-paired reals
  std::array<double, 4> printed{};         // ascending, when mappable
  std::array<double, 4> numeric_tabulated{};
  std::array<double, 4> numeric_conjugated{};
  double dev_tabulated = 0.0;              // max |printed - numeric| when mappable
  double dev_conjugated = 0.0;
};

/// Evaluates the printed limiting-case eigenvalue formulas literally and
/// compares them against the numerically computed spectra of both covariance
/// models. Disagreements are reported, not suppressed.
LimitingCaseReport limiting_case_eigenvalues(LimitingCase which, const ProbeParams& p);

// ---------------------------------------------------------------------------
// QFI sweeps
// ---------------------------------------------------------------------------

struct SweepSpec {
  ProbeParams fixed;
  Axis vary_x;
  std::optional<Axis> vary_y;
  Parameter which = Parameter::Phi;
  QfiEngine engine = QfiEngine::ClosedForm;
  CovarianceModel model = CovarianceModel::Tabulated;
  bool emit_reduced_thermometry = false;
  bool emit_spectrum = false;

  // Eigen-form cells within this distance of the phi = pi/4, 3pi/4 crossings
  // are evaluated by the fidelity-limit engine instead.
  double guard_band = 0.02;
};

void validate_spec(const SweepSpec& spec);

struct SweepCell {
  int ix = 0, iy = 0;
  double x = 0.0, y = 0.0;
  double value = 0.0;
  QfiEngine engine_used = QfiEngine::ClosedForm;
  QfiFlags flags;
  bool failed = false;  // both requested engine and fallback errored
  double reduced_value = 0.0;           // when emit_reduced_thermometry
  std::array<double, 4> lambda{};       // when emit_spectrum
};

struct SweepTable {
  SweepSpec spec;
  std::vector<SweepCell> cells;  // row-major: iy outer, ix inner
};

/// Evaluates the QFI on a grid. Per-cell engine errors fall back to the
/// fidelity-limit engine and are recorded in flags; the sweep never aborts.
SweepTable qfi_sweep(const SweepSpec& spec);
SweepTable qfi_sweep_serial(const SweepSpec& spec);

// ---------------------------------------------------------------------------
// Thermometry
// ---------------------------------------------------------------------------

enum class ThermometryVariant { Full, Reduced };

/// QFI for the mean thermal number nbar: Full works on the two-mode state,
/// Reduced on the mode-1 marginal (single-mode fidelity limit).
QfiResult thermometry_qfi(const ProbeParams& p, ThermometryVariant variant,
                          double step = 1e-4);

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

struct ArgmaxResult {
  double location = 0.0;   // refined
  double value = 0.0;      // refined
  double grid_location = 0.0;
  double grid_value = 0.0;
};

/// Grid argmax with 3-point parabolic refinement. Ties (values equal within
/// 1e-9 relative) break toward the smaller axis value.
ArgmaxResult argmax_scan(const std::vector<double>& xs, const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Figure presets
// ---------------------------------------------------------------------------

enum class PresetKind { Spectrum, Qfi, Thermometry };

struct Preset {
  std::string name;
  PresetKind kind = PresetKind::Qfi;
  SweepSpec sweep;          // for Qfi / Thermometry
  ProbeParams fixed;        // for Spectrum
  Axis axis;                // for Spectrum (inner axis)
  std::optional<Axis> outer;  // for Spectrum (outer axis)
};

const std::vector<Preset>& figure_presets();
const Preset& find_preset(const std::string& name);

}  // namespace gqfi
