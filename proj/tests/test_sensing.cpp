#include <doctest.h>

#include <cmath>

#include "gqfi/sensing.hpp"

using namespace gqfi;

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

TEST_CASE("spectrum trace finds the tabulated crossings") {
  const ProbeParams fixed{1.0, 1.0, 0.5, 0.0};
  const Axis axis{Parameter::Phi, 0.0, kPi, 400};
  const SpectrumTable table = spectrum_trace(fixed, axis);
  REQUIRE(table.rows.size() == 400);

  REQUIRE(table.crossings.size() == 2);
  CHECK(std::abs(table.crossings[0] - 0.25 * kPi) < axis.at(1) - axis.at(0));
  CHECK(std::abs(table.crossings[1] - 0.75 * kPi) < axis.at(1) - axis.at(0));
  // refinement lands essentially on the crossing
  CHECK(std::abs(table.crossings[0] - 0.25 * kPi) < 1e-6);

  // serial and parallel paths agree exactly
  const SpectrumTable serial = spectrum_trace_serial(fixed, axis);
  for (size_t i = 0; i < table.rows.size(); ++i) {
    for (int k = 0; k < 4; ++k) {
      CHECK(table.rows[i].lambda[k] == serial.rows[i].lambda[k]);
    }
  }
}

TEST_CASE("crossing locations converge with grid refinement") {
  const ProbeParams fixed{1.0, 1.0, 0.5, 0.0};
  double prev_err = 1.0;
  for (int count : {200, 400, 800}) {
    const SpectrumTable t = spectrum_trace(fixed, {Parameter::Phi, 0.0, kPi, count});
    REQUIRE(t.crossings.size() >= 1);
    const double err = std::abs(t.crossings[0] - 0.25 * kPi);
    CHECK(err <= std::max(prev_err, 1e-9));
    prev_err = err;
  }
}

TEST_CASE("degeneracy along r at phi = pi/4, lifted at pi/2") {
  const SpectrumTable at_quarter =
      spectrum_trace({1.0, 1.0, 0.0, 0.25 * kPi}, {Parameter::R, 0.0, 1.0, 101});
  for (const auto& row : at_quarter.rows) {
    CHECK(row.branch_gap < 1e-9);
  }
  const SpectrumTable at_half =
      spectrum_trace({1.0, 1.0, 0.0, 0.5 * kPi}, {Parameter::R, 0.0, 1.0, 101});
  for (const auto& row : at_half.rows) {
    if (row.x >= 0.1) CHECK(row.branch_gap > 1e-3);
  }
}

TEST_CASE("limiting cases") {
  SUBCASE("r0 balanced: spectrum independent of phi, +-(1+S)") {
    for (double phi : {0.2, 0.9, 2.2}) {
      const auto rep = limiting_case_eigenvalues(LimitingCase::R0, {1.0, 1.0, 0.0, phi});
      REQUIRE(rep.mappable);
      CHECK(rep.printed[0] == doctest::Approx(-3.0));
      CHECK(rep.printed[3] == doctest::Approx(3.0));
      CHECK(rep.dev_tabulated < 1e-8);
      CHECK(rep.dev_conjugated < 1e-8);
    }
  }
  SUBCASE("r0 imbalanced at phi=0 reproduces the thermal spectrum") {
    const auto rep = limiting_case_eigenvalues(LimitingCase::R0, {1.0, 2.0, 0.0, 0.0});
    REQUIRE(rep.mappable);
    CHECK(rep.printed[0] == doctest::Approx(-5.0));
    CHECK(rep.printed[1] == doctest::Approx(-3.0));
    CHECK(rep.dev_tabulated < 1e-8);
  }
  SUBCASE("r0 imbalanced at generic phi disagrees with the numeric spectrum") {
    // the printed radicals go complex; the report flags them as unmappable
    const auto rep = limiting_case_eigenvalues(LimitingCase::R0, {1.0, 2.0, 0.0, 0.7});
    CHECK_FALSE(rep.mappable);
    // the true spectrum stays the thermal one for any phi at r = 0
    CHECK(rep.numeric_conjugated[3] == doctest::Approx(5.0).epsilon(1e-9));
  }
  SUBCASE("phi0 balanced at r=0") {
    const auto rep = limiting_case_eigenvalues(LimitingCase::Phi0, {1.0, 1.0, 0.0, 0.0});
    REQUIRE(rep.mappable);
    CHECK(rep.printed[3] == doctest::Approx(3.0));
    CHECK(rep.dev_tabulated < 1e-8);
  }
  SUBCASE("phi0 at r>0: printed form deviates and the deviation is reported") {
    const auto rep = limiting_case_eigenvalues(LimitingCase::Phi0, {1.0, 1.0, 0.5, 0.0});
    REQUIRE(rep.mappable);
    CHECK(rep.dev_tabulated > 1e-3);  // reported, not suppressed
  }
  SUBCASE("r_large asymptote zeros conflict with physicality and are reported") {
    const auto rep = limiting_case_eigenvalues(LimitingCase::RLarge, {1.0, 1.0, 5.0, 0.3});
    CHECK(rep.mappable);
    CHECK(rep.dev_tabulated > 1.0);  // zeros vs Lambda >= 1 branches
  }
  SUBCASE("case mismatch guards") {
    CHECK_THROWS_AS(limiting_case_eigenvalues(LimitingCase::R0, {1.0, 1.0, 0.2, 0.3}),
                    CaseMismatchError);
    CHECK_THROWS_AS(limiting_case_eigenvalues(LimitingCase::Balanced, {1.0, 2.0, 0.2, 0.3}),
                    CaseMismatchError);
    CHECK_THROWS_AS(limiting_case_eigenvalues(LimitingCase::RLarge, {1.0, 1.0, 0.5, 0.3}),
                    CaseMismatchError);
  }
}

TEST_CASE("qfi_sweep basics") {
  SweepSpec spec;
  spec.fixed = {1.0, 1.0, 0.0, 0.0};
  spec.vary_x = {Parameter::Phi, 0.0, kPi, 21};
  spec.vary_y = Axis{Parameter::R, 0.0, 0.5, 6};
  spec.which = Parameter::Phi;

  const SweepTable table = qfi_sweep(spec);
  REQUIRE(table.cells.size() == 21 * 6);

  SUBCASE("row-major deterministic order") {
    CHECK(table.cells[0].ix == 0);
    CHECK(table.cells[0].iy == 0);
    CHECK(table.cells[1].ix == 1);
    CHECK(table.cells[21].iy == 1);
  }
  SUBCASE("serial matches parallel bit for bit") {
    const SweepTable serial = qfi_sweep_serial(spec);
    for (size_t i = 0; i < table.cells.size(); ++i) {
      CHECK(table.cells[i].value == serial.cells[i].value);
      CHECK(table.cells[i].engine_used == serial.cells[i].engine_used);
    }
  }
  SUBCASE("balanced unsqueezed row is identically zero") {
    for (const auto& cell : table.cells) {
      if (cell.iy == 0) {
        CHECK(std::abs(cell.value) < 1e-10);
      }
      CHECK_FALSE(cell.failed);
    }
  }
}

TEST_CASE("eigen-engine sweep falls back inside guard bands") {
  SweepSpec spec;
  spec.fixed = {1.0, 2.0, 0.3, 0.0};
  spec.vary_x = {Parameter::Phi, 0.7, 0.9, 21};  // straddles pi/4
  spec.which = Parameter::R;
  spec.engine = QfiEngine::EigenForm;
  const SweepTable table = qfi_sweep(spec);
  int fallbacks = 0;
  for (const auto& cell : table.cells) {
    CHECK_FALSE(cell.failed);
    if (cell.flags.fallback) {
      ++fallbacks;
      CHECK(cell.engine_used == QfiEngine::FidelityLimit);
      CHECK(std::abs(cell.x - 0.25 * kPi) < spec.guard_band + 1e-12);
    }
  }
  CHECK(fallbacks >= 2);
}

TEST_CASE("thermometry") {
  SUBCASE("full-state value and invariance") {
    for (double r : {0.0, 0.4, 0.8}) {
      for (double phi : {0.0, 0.7, 2.0}) {
        const QfiResult res = thermometry_qfi({1.0, 1.0, r, phi}, ThermometryVariant::Full);
        CHECK(res.value == doctest::Approx(0.5).epsilon(1e-8));
      }
    }
  }
  SUBCASE("reduced thermal chain rule at r = 0") {
    const double nbar = 1.0, mbar = 2.0;
    for (double phi : {0.3, 0.8, 1.4}) {
      const double tau = std::cos(phi) * std::cos(phi);
      const double ntil = tau * nbar + (1.0 - tau) * mbar;
      const double expect = tau * tau / (ntil * (ntil + 1.0));
      const QfiResult res =
          thermometry_qfi({nbar, mbar, 0.0, phi}, ThermometryVariant::Reduced);
      CHECK(res.value == doctest::Approx(expect).epsilon(1e-8));
    }
  }
  SUBCASE("reduced equals full at tau = 1, r = 0") {
    const QfiResult full = thermometry_qfi({1.3, 0.4, 0.0, 0.0}, ThermometryVariant::Full);
    const QfiResult red = thermometry_qfi({1.3, 0.4, 0.0, 0.0}, ThermometryVariant::Reduced);
    CHECK(red.value == doctest::Approx(full.value).epsilon(1e-8));
  }
}

TEST_CASE("argmax_scan") {
  SUBCASE("exact vertex of a sampled parabola") {
    std::vector<double> xs, vals;
    for (int i = 0; i <= 10; ++i) {
      const double x = 0.1 * i;
      xs.push_back(x);
      vals.push_back(3.0 - (x - 0.44) * (x - 0.44));
    }
    const auto res = argmax_scan(xs, vals);
    CHECK(res.location == doctest::Approx(0.44).epsilon(1e-12));
    CHECK(res.value == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("flat table errors") {
    const std::vector<double> xs{0.0, 1.0, 2.0};
    const std::vector<double> vals{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(argmax_scan(xs, vals), FlatTableError);
  }
  SUBCASE("ties break toward the smaller axis value") {
    const std::vector<double> xs{0.0, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> vals{0.0, 1.0, 0.5, 1.0, 0.0};
    const auto res = argmax_scan(xs, vals);
    CHECK(res.grid_location == 1.0);
  }
}

TEST_CASE("figure presets resolve") {
  CHECK(find_preset("fig2a").kind == PresetKind::Spectrum);
  CHECK(find_preset("fig3a").sweep.which == Parameter::Phi);
  CHECK(find_preset("fig3b").sweep.fixed.mbar == 20.0);
  CHECK(find_preset("fig4a").sweep.which == Parameter::R);
  CHECK(find_preset("fig5a").sweep.emit_reduced_thermometry);
  CHECK(find_preset("fig6b").fixed.mbar == 10.0);
  CHECK_THROWS_AS(find_preset("fig9z"), UnknownParameterError);
}

TEST_CASE("every sweep cell state passes validation") {
  SweepSpec spec;
  spec.fixed = {1.0, 2.0, 0.0, 0.0};
  spec.vary_x = {Parameter::Phi, 0.1, 3.0, 12};
  spec.vary_y = Axis{Parameter::R, 0.05, 0.5, 5};
  spec.which = Parameter::R;
  const SweepTable table = qfi_sweep(spec);
  for (const auto& cell : table.cells) {
    ProbeParams p = with_parameter(spec.fixed, spec.vary_x.id, cell.x);
    p = with_parameter(p, spec.vary_y->id, cell.y);
    for (auto model : {CovarianceModel::Conjugated, CovarianceModel::Tabulated}) {
      const auto rep = validate_covariance(probe_sigma(p, model), ModeOrdering::QQPP);
      CHECK(rep.is_physical);
    }
  }
}
