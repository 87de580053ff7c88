#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "gqfi/crb.hpp"
#include "gqfi/fock.hpp"
#include "gqfi/io.hpp"
#include "gqfi/sensing.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct CommonOpts {
  double nbar = 1.0;
  double mbar = 1.0;
  double r = 0.0;
  double phi = 0.0;
  double tau = -1.0;  // converted to phi when set
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
};

void add_param_options(CLI::App* cmd, CommonOpts& o, bool with_tau) {
  cmd->add_option("--nbar", o.nbar, "mean thermal number, mode 1");
  cmd->add_option("--mbar", o.mbar, "mean thermal number, mode 2");
  cmd->add_option("--r", o.r, "two-mode squeezing strength");
  auto* phi = cmd->add_option("--phi", o.phi, "beam-splitter angle in radians, [0, pi]");
  if (with_tau) {
    auto* tau = cmd->add_option("--tau", o.tau, "transmissivity; converted via phi = arccos(sqrt(tau))");
    tau->excludes(phi);
  }
}

void add_output_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "output path (stdout when omitted)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", o.seed, "random seed (echoed into metadata)");
}

gqfi::ProbeParams resolve_params(CommonOpts& o) {
  if (o.tau >= 0.0) {
    if (o.tau > 1.0) throw gqfi::UnknownParameterError("tau must lie in [0, 1]");
    o.phi = std::acos(std::sqrt(o.tau));
  }
  if (o.phi < 0.0 || o.phi > kPi) {
    throw gqfi::UnknownParameterError("phi must lie in [0, pi]");
  }
  gqfi::ProbeParams p{o.nbar, o.mbar, o.r, o.phi};
  gqfi::validate_params(p);
  return p;
}

void echo_params(gqfi::Metadata& meta, const gqfi::ProbeParams& p) {
  meta.add("nbar", p.nbar);
  meta.add("mbar", p.mbar);
  meta.add("r", p.r);
  meta.add("phi", p.phi);
}

int cmd_state(CommonOpts& o) {
  const gqfi::ProbeParams p = resolve_params(o);
  const gqfi::GaussianState state = gqfi::build_probe(p);
  const auto rep = gqfi::validate_covariance(state.sigma, state.ordering);
  const auto tab = gqfi::covariance_closed_form(p);

  std::cout << "probe state (" << gqfi::kConvention << ")\n";
  std::cout << "params: nbar=" << gqfi::format_double(p.nbar)
            << " mbar=" << gqfi::format_double(p.mbar) << " r=" << gqfi::format_double(p.r)
            << " phi=" << gqfi::format_double(p.phi) << "\n";
  std::cout << "sigma:\n";
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      std::cout << (j ? "," : "  ") << gqfi::format_double(state.sigma(i, j));
    }
    std::cout << "\n";
  }
  std::cout << "symplectic eigenvalues: " << gqfi::format_double(rep.symplectic_eigenvalues[0])
            << ", " << gqfi::format_double(rep.symplectic_eigenvalues[1]) << "\n";
  std::cout << "physical: " << (rep.is_physical ? "yes" : "no") << "\n";
  if (tab.flagged.empty()) {
    std::cout << "tabulated covariance: matches conjugation on all entries\n";
  } else {
    std::cout << "tabulated covariance: flagged entries";
    for (auto [i, j] : tab.flagged) std::cout << " (" << i + 1 << "," << j + 1 << ")";
    std::cout << ", max deviation " << gqfi::format_double(tab.max_discrepancy) << "\n";
  }

  if (!o.out.empty()) {
    gqfi::Metadata meta = gqfi::base_metadata("state");
    echo_params(meta, p);
    meta.add("seed", static_cast<long long>(o.seed));
    // One-cell sweep table reuses the serializers for file output.
    gqfi::SweepSpec spec;
    spec.fixed = p;
    spec.vary_x = {gqfi::Parameter::Phi, p.phi - 1e-9, p.phi + 1e-9, 2};
    std::vector<std::pair<gqfi::ProbeParams, gqfi::SpectrumTable>> blocks;
    gqfi::SpectrumTable table;
    table.axis = spec.vary_x;
    gqfi::SpectrumRow row;
    row.x = p.phi;
    row.lambda = gqfi::c_matrix_eigenvalues(state.sigma);
    row.branch_gap = rep.symplectic_eigenvalues[0] - rep.symplectic_eigenvalues[1];
    table.rows.push_back(row);
    blocks.emplace_back(p, table);
    gqfi::write_output(o.out, std::cout,
                       gqfi::serialize_spectrum(blocks, meta, gqfi::parse_format(o.format)));
  }
  return 0;
}

struct SpectrumOpts {
  CommonOpts common;
  std::string preset;
  std::string axis = "phi";
  double lo = 0.0, hi = kPi;
  int count = 200;
  std::string model = "tabulated";
};

int cmd_spectrum(SpectrumOpts& o) {
  gqfi::Metadata meta = gqfi::base_metadata("spectrum");
  std::vector<std::pair<gqfi::ProbeParams, gqfi::SpectrumTable>> blocks;

  if (!o.preset.empty()) {
    const gqfi::Preset& pr = gqfi::find_preset(o.preset);
    if (pr.kind != gqfi::PresetKind::Spectrum) {
      throw gqfi::UnknownParameterError("preset '" + o.preset + "' is not a spectrum preset");
    }
    meta.add("preset", o.preset);
    echo_params(meta, pr.fixed);
    meta.add("axis", gqfi::parameter_name(pr.axis.id));
    meta.add("model", "tabulated");
    meta.add("seed", static_cast<long long>(o.common.seed));
    if (pr.outer) {
      for (int i = 0; i < pr.outer->count; ++i) {
        const gqfi::ProbeParams fixed =
            gqfi::with_parameter(pr.fixed, pr.outer->id, pr.outer->at(i));
        blocks.emplace_back(fixed, gqfi::spectrum_trace(fixed, pr.axis));
      }
    } else {
      blocks.emplace_back(pr.fixed, gqfi::spectrum_trace(pr.fixed, pr.axis));
    }
  } else {
    const gqfi::ProbeParams p = resolve_params(o.common);
    const gqfi::Axis axis{gqfi::parse_parameter(o.axis), o.lo, o.hi, o.count};
    const auto model = o.model == "conjugated" ? gqfi::CovarianceModel::Conjugated
                                               : gqfi::CovarianceModel::Tabulated;
    echo_params(meta, p);
    meta.add("axis", o.axis);
    meta.add("axis_min", o.lo);
    meta.add("axis_max", o.hi);
    meta.add("axis_count", static_cast<long long>(o.count));
    meta.add("model", o.model);
    meta.add("seed", static_cast<long long>(o.common.seed));
    blocks.emplace_back(p, gqfi::spectrum_trace(p, axis, model));
  }

  gqfi::write_output(o.common.out, std::cout,
                     gqfi::serialize_spectrum(blocks, meta, gqfi::parse_format(o.common.format)));
  return 0;
}

struct QfiOpts {
  CommonOpts common;
  std::string which = "phi";
  std::string engine = "all";
  std::string model = "tabulated";
  double step = 1e-4;
};

int cmd_qfi(QfiOpts& o) {
  const gqfi::ProbeParams p = resolve_params(o.common);
  const gqfi::Parameter which = gqfi::parse_parameter(o.which);
  const auto model = o.model == "conjugated" ? gqfi::CovarianceModel::Conjugated
                                             : gqfi::CovarianceModel::Tabulated;
  std::vector<gqfi::QfiEngine> engines;
  if (o.engine == "all") {
    engines = {gqfi::QfiEngine::ClosedForm, gqfi::QfiEngine::EigenForm,
               gqfi::QfiEngine::FidelityLimit};
  } else {
    engines = {gqfi::parse_engine(o.engine)};
  }

  for (auto e : engines) {
    std::cout << gqfi::engine_name(e) << ": ";
    try {
      const gqfi::QfiResult res =
          (e == gqfi::QfiEngine::FidelityLimit)
              ? gqfi::qfi_fidelity_limit(p, which, model, o.step)
              : gqfi::qfi_by_engine(e, p, which, model);
      std::cout << gqfi::format_double(res.value) << "  (Lambda = "
                << gqfi::format_double(res.lambda_pair[0]) << ", "
                << gqfi::format_double(res.lambda_pair[1]) << "; flags "
                << res.flags.to_string() << ")\n";
    } catch (const gqfi::Error& err) {
      std::cout << "unavailable (" << err.what() << ")\n";
    }
  }
  return 0;
}

struct SweepOpts {
  CommonOpts common;
  std::string preset;
  std::string which = "phi";
  std::string engine = "closed";
  std::string model = "tabulated";
  std::string x_param = "phi";
  double x_min = 0.0, x_max = kPi;
  int x_count = 81;
  std::string y_param;
  double y_min = 0.0, y_max = 0.5;
  int y_count = 2;
  bool reduced = false;
  bool spectrum = false;
};

int cmd_sweep(SweepOpts& o, const CLI::App* cmd) {
  gqfi::SweepSpec spec;
  gqfi::Metadata meta = gqfi::base_metadata("sweep");

  if (!o.preset.empty()) {
    const gqfi::Preset& pr = gqfi::find_preset(o.preset);
    if (pr.kind == gqfi::PresetKind::Spectrum) {
      throw gqfi::UnknownParameterError("preset '" + o.preset +
                                        "' is a spectrum preset; use the spectrum command");
    }
    spec = pr.sweep;
    meta.add("preset", o.preset);
  }

  // Explicit flags override preset values.
  auto given = [cmd](const std::string& name) { return cmd->count(name) > 0; };
  if (o.preset.empty() || given("--nbar")) spec.fixed.nbar = o.common.nbar;
  if (o.preset.empty() || given("--mbar")) spec.fixed.mbar = o.common.mbar;
  if (o.preset.empty() || given("--r")) spec.fixed.r = o.common.r;
  if (o.preset.empty() || given("--phi") || given("--tau")) {
    CommonOpts tmp = o.common;
    spec.fixed.phi = resolve_params(tmp).phi;
  }
  if (o.preset.empty() || given("--which")) spec.which = gqfi::parse_parameter(o.which);
  if (o.preset.empty() || given("--engine")) spec.engine = gqfi::parse_engine(o.engine);
  if (o.preset.empty() || given("--model")) {
    spec.model = o.model == "conjugated" ? gqfi::CovarianceModel::Conjugated
                                         : gqfi::CovarianceModel::Tabulated;
  }
  if (o.preset.empty() || given("--x")) spec.vary_x.id = gqfi::parse_parameter(o.x_param);
  if (o.preset.empty() || given("--x-min")) spec.vary_x.lo = o.x_min;
  if (o.preset.empty() || given("--x-max")) spec.vary_x.hi = o.x_max;
  if (o.preset.empty() || given("--x-count")) spec.vary_x.count = o.x_count;
  if (given("--y")) {
    spec.vary_y = gqfi::Axis{gqfi::parse_parameter(o.y_param), o.y_min, o.y_max, o.y_count};
  }
  if (given("--reduced")) spec.emit_reduced_thermometry = o.reduced;
  if (given("--spectrum")) spec.emit_spectrum = o.spectrum;

  echo_params(meta, spec.fixed);
  meta.add("which", gqfi::parameter_name(spec.which));
  meta.add("engine", gqfi::engine_name(spec.engine));
  meta.add("model", gqfi::covariance_model_name(spec.model));
  meta.add("x", gqfi::parameter_name(spec.vary_x.id));
  meta.add("x_min", spec.vary_x.lo);
  meta.add("x_max", spec.vary_x.hi);
  meta.add("x_count", static_cast<long long>(spec.vary_x.count));
  if (spec.vary_y) {
    meta.add("y", gqfi::parameter_name(spec.vary_y->id));
    meta.add("y_min", spec.vary_y->lo);
    meta.add("y_max", spec.vary_y->hi);
    meta.add("y_count", static_cast<long long>(spec.vary_y->count));
  }
  meta.add("guard_band", spec.guard_band);
  meta.add("seed", static_cast<long long>(o.common.seed));

  const gqfi::SweepTable table = gqfi::qfi_sweep(spec);
  gqfi::write_output(o.common.out, std::cout,
                     gqfi::serialize_sweep(table, meta, gqfi::parse_format(o.common.format)));
  return 0;
}

struct CrbOpts {
  CommonOpts common;
  std::string which = "phi";
  double theta_star = 0.7;
  int shots = 200;
  int trials = 2000;
};

int cmd_crb(CrbOpts& o) {
  o.common.phi = (o.which == "phi") ? o.theta_star : o.common.phi;
  const gqfi::ProbeParams p = resolve_params(o.common);
  const gqfi::Parameter which = gqfi::parse_parameter(o.which);
  const gqfi::CrbReport rep =
      gqfi::crb_report(p, which, o.theta_star, o.shots, o.trials, o.common.seed);

  gqfi::Metadata meta = gqfi::base_metadata("crb");
  echo_params(meta, p);
  meta.add("which", o.which);
  meta.add("theta_star", o.theta_star);
  meta.add("shots", static_cast<long long>(o.shots));
  meta.add("trials", static_cast<long long>(o.trials));
  meta.add("seed", static_cast<long long>(o.common.seed));
  meta.add("rng", "mt19937_64 + splitmix64 trial substreams, Box-Muller");

  gqfi::write_output(o.common.out, std::cout,
                     gqfi::serialize_crb(rep, meta, gqfi::parse_format(o.common.format)));
  if (o.common.out.empty()) return 0;
  std::cout << "variance " << gqfi::format_double(rep.empirical_variance) << " vs CRB "
            << gqfi::format_double(rep.crb) << " (classical bound "
            << gqfi::format_double(rep.classical_bound) << ")\n";
  return 0;
}

bool check(bool ok, const std::string& name, const std::string& detail, int& failures) {
  std::cout << (ok ? "[ok]   " : "[FAIL] ") << name;
  if (!detail.empty()) std::cout << " : " << detail;
  std::cout << "\n";
  if (!ok) ++failures;
  return ok;
}

int cmd_validate() {
  using namespace gqfi;
  int failures = 0;

  {  // engine agreement on tabulated sweeps
    double worst = 0.0;
    for (double mbar : {1.0, 2.0}) {
      for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
          const double phi = 0.15 + (2.9 - 0.15) * i / 5.0;
          const double r = 0.05 + 0.45 * j / 5.0;
          if (std::abs(phi - 0.25 * kPi) < 0.03 || std::abs(phi - 0.75 * kPi) < 0.03) continue;
          const ProbeParams p{1.0, mbar, r, phi};
          for (Parameter which : {Parameter::Phi, Parameter::R}) {
            const double a = qfi_closed_form(p, which).value;
            const double c = qfi_fidelity_limit(p, which).value;
            double b = a;
            try {
              b = qfi_eigen_form(p, which).value;
            } catch (const DegenerateSpectrumError&) {}
            const double scale = std::max({a, b, c, 1e-12});
            worst = std::max(worst, (std::max({a, b, c}) - std::min({a, b, c})) / scale);
          }
        }
      }
    }
    check(worst <= 1e-5, "engine agreement", "max relative spread " + format_double(worst),
          failures);
  }

  {  // Fock oracle cross-checks at a reduced cutoff
    const int cutoff = 20;
    const ProbeParams a{0.8, 0.6, 0.3, 0.7};
    const ProbeParams b{0.8, 0.6, 0.32, 0.74};
    const double f_fock = fock_probe_fidelity(a, b, cutoff);
    const double f_ps =
        uhlmann_fidelity(build_probe(a), build_probe(b)).value;
    check(std::abs(f_fock - f_ps) <= 1e-4, "Fock fidelity vs phase space",
          "difference " + format_double(std::abs(f_fock - f_ps)), failures);

    const double q_fock = fock_qfi(a, Parameter::R, 1e-2, cutoff);
    const double q_ps = qfi_fidelity_limit(a, Parameter::R, CovarianceModel::Conjugated).value;
    check(std::abs(q_fock - q_ps) / q_ps <= 1e-3, "Fock QFI vs fidelity limit",
          "relative difference " + format_double(std::abs(q_fock - q_ps) / q_ps), failures);

    const Mat4 sig_fock = fock_covariance(fock_probe(a, cutoff));
    const Mat4 sig_ps = build_probe(a).sigma;
    const double dev = (sig_fock - sig_ps).cwiseAbs().maxCoeff();
    check(dev <= 1e-4, "Fock moments vs channels", "max deviation " + format_double(dev),
          failures);
  }

  {  // limiting cases that are expected to agree
    const auto r0 = limiting_case_eigenvalues(LimitingCase::R0, {1.0, 1.0, 0.0, 0.9});
    check(r0.mappable && r0.dev_tabulated <= 1e-8, "limiting case r0 (balanced)",
          "deviation " + format_double(r0.dev_tabulated), failures);
    const auto phi0 = limiting_case_eigenvalues(LimitingCase::Phi0, {1.0, 1.0, 0.0, 0.0});
    check(phi0.mappable && phi0.dev_tabulated <= 1e-8, "limiting case phi0 at r=0",
          "deviation " + format_double(phi0.dev_tabulated), failures);
    const auto rl = limiting_case_eigenvalues(LimitingCase::RLarge, {1.0, 1.0, 5.0, 0.3});
    check(rl.mappable, "limiting case r_large reported",
          "deviation from numeric spectrum " + format_double(rl.dev_tabulated), failures);
  }

  {  // CRB quick run
    const ProbeParams p{1.0, 2.0, 0.3, 0.7};
    const CrbReport rep = crb_report(p, Parameter::Phi, 0.7, 200, 300, 20240601ULL);
    const double floor = (1.0 - 4.0 / std::sqrt(300.0)) * rep.crb;
    check(rep.classical_fi <= rep.qfi + 1e-8, "classical FI below QFI",
          format_double(rep.classical_fi) + " <= " + format_double(rep.qfi), failures);
    check(rep.empirical_variance >= floor, "MLE variance above CRB floor",
          format_double(rep.empirical_variance) + " >= " + format_double(floor), failures);
  }

  {  // determinism of serialized sweeps
    SweepSpec spec;
    spec.fixed = {1.0, 1.0, 0.0, 0.0};
    spec.vary_x = {Parameter::Phi, 0.1, 3.0, 12};
    spec.vary_y = Axis{Parameter::R, 0.05, 0.4, 4};
    spec.which = Parameter::Phi;
    Metadata meta = base_metadata("sweep");
    const std::string s1 = serialize_sweep(qfi_sweep(spec), meta, OutputFormat::Csv);
    const std::string s2 = serialize_sweep(qfi_sweep(spec), meta, OutputFormat::Csv);
    const std::string s3 = serialize_sweep(qfi_sweep_serial(spec), meta, OutputFormat::Csv);
    check(s1 == s2 && s1 == s3, "deterministic sweep serialization", "", failures);
  }

  std::cout << (failures == 0 ? "validate: all checks passed\n"
                              : "validate: " + std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("GQFI_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{"gqfi - two-mode Gaussian probe states: spectra, quantum Fisher "
               "information, thermometry and Cramer-Rao experiments"};
  app.require_subcommand(1);

  CommonOpts state_o;
  auto* state_cmd = app.add_subcommand("state", "build a probe state and print its moments");
  add_param_options(state_cmd, state_o, true);
  add_output_options(state_cmd, state_o);

  SpectrumOpts spec_o;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalue traces of C = i Omega sigma");
  add_param_options(spectrum_cmd, spec_o.common, true);
  add_output_options(spectrum_cmd, spec_o.common);
  spectrum_cmd->add_option("--preset", spec_o.preset, "figure preset (fig2a, fig2b, fig6a, fig6b)");
  spectrum_cmd->add_option("--axis", spec_o.axis, "swept parameter (phi or r)");
  spectrum_cmd->add_option("--min", spec_o.lo, "axis start");
  spectrum_cmd->add_option("--max", spec_o.hi, "axis end");
  spectrum_cmd->add_option("--count", spec_o.count, "grid points");
  spectrum_cmd->add_option("--model", spec_o.model, "tabulated or conjugated")
      ->check(CLI::IsMember({"tabulated", "conjugated"}));

  QfiOpts qfi_o;
  auto* qfi_cmd = app.add_subcommand("qfi", "QFI at a point, by one or all engines");
  add_param_options(qfi_cmd, qfi_o.common, true);
  add_output_options(qfi_cmd, qfi_o.common);
  qfi_cmd->add_option("--which", qfi_o.which, "target parameter (phi, r, nbar, mbar)");
  qfi_cmd->add_option("--engine", qfi_o.engine, "closed, eigen, fidelity or all");
  qfi_cmd->add_option("--model", qfi_o.model, "tabulated or conjugated")
      ->check(CLI::IsMember({"tabulated", "conjugated"}));
  qfi_cmd->add_option("--step", qfi_o.step, "fidelity-limit stencil step");

  SweepOpts sweep_o;
  auto* sweep_cmd = app.add_subcommand("sweep", "QFI sweeps over parameter grids");
  add_param_options(sweep_cmd, sweep_o.common, true);
  add_output_options(sweep_cmd, sweep_o.common);
  sweep_cmd->add_option("--preset", sweep_o.preset,
                        "figure preset (fig3a, fig3b, fig4a, fig4b, fig5a, fig5b)");
  sweep_cmd->add_option("--which", sweep_o.which, "target parameter");
  sweep_cmd->add_option("--engine", sweep_o.engine, "closed, eigen or fidelity");
  sweep_cmd->add_option("--model", sweep_o.model, "tabulated or conjugated")
      ->check(CLI::IsMember({"tabulated", "conjugated"}));
  sweep_cmd->add_option("--x", sweep_o.x_param, "x axis parameter");
  sweep_cmd->add_option("--x-min", sweep_o.x_min, "x axis start");
  sweep_cmd->add_option("--x-max", sweep_o.x_max, "x axis end");
  sweep_cmd->add_option("--x-count", sweep_o.x_count, "x axis points");
  sweep_cmd->add_option("--y", sweep_o.y_param, "optional y axis parameter");
  sweep_cmd->add_option("--y-min", sweep_o.y_min, "y axis start");
  sweep_cmd->add_option("--y-max", sweep_o.y_max, "y axis end");
  sweep_cmd->add_option("--y-count", sweep_o.y_count, "y axis points");
  sweep_cmd->add_flag("--reduced", sweep_o.reduced, "emit reduced-state thermometry column");
  sweep_cmd->add_flag("--spectrum", sweep_o.spectrum, "emit eigenvalue columns");

  CrbOpts crb_o;
  auto* crb_cmd = app.add_subcommand("crb", "Monte-Carlo Cramer-Rao experiment");
  add_param_options(crb_cmd, crb_o.common, false);
  add_output_options(crb_cmd, crb_o.common);
  crb_cmd->add_option("--which", crb_o.which, "estimated parameter");
  crb_cmd->add_option("--theta-star", crb_o.theta_star, "true parameter value");
  crb_cmd->add_option("--shots", crb_o.shots, "measurements per trial");
  crb_cmd->add_option("--trials", crb_o.trials, "independent MLE experiments");

  auto* validate_cmd = app.add_subcommand("validate", "run the oracle cross-check suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (state_cmd->parsed()) return cmd_state(state_o);
    if (spectrum_cmd->parsed()) return cmd_spectrum(spec_o);
    if (qfi_cmd->parsed()) return cmd_qfi(qfi_o);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_o, sweep_cmd);
    if (crb_cmd->parsed()) return cmd_crb(crb_o);
    if (validate_cmd->parsed()) return cmd_validate();
  } catch (const gqfi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
