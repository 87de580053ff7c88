#include <doctest.h>

#include <cmath>

#include "gqfi/fock.hpp"
#include "gqfi/fidelity.hpp"
#include "gqfi/qfi.hpp"

using namespace gqfi;

namespace {
constexpr double kPi = 3.14159265358979323846;
}  // namespace

TEST_CASE("fock_thermal weights and deficit") {
  SUBCASE("vacuum input") {
    double deficit = 1.0;
    const FockOperator rho = fock_thermal(0.0, 0.0, 8, &deficit);
    CHECK(deficit == doctest::Approx(0.0));
    CHECK(rho.matrix(0, 0).real() == doctest::Approx(1.0));
    CHECK(rho.matrix.cwiseAbs().sum() == doctest::Approx(1.0));
  }
  SUBCASE("geometric weights and deficit at cutoff 30") {
    double deficit = 1.0;
    const FockOperator rho = fock_thermal(1.0, 0.0, 30, &deficit);
    CHECK(deficit == doctest::Approx(std::pow(0.5, 30)).epsilon(1e-9));
    CHECK(rho.matrix(0, 0).real() == doctest::Approx(0.5));
    CHECK(rho.matrix(30, 30).real() == doctest::Approx(0.25));  // |1,0>
  }
  SUBCASE("mean photon number") {
    const FockOperator rho = fock_thermal(0.8, 0.4, 30);
    CHECK(fock_mean_photon(rho, 1) == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(fock_mean_photon(rho, 2) == doctest::Approx(0.4).epsilon(1e-6));
  }
  SUBCASE("severe truncation is rejected") {
    CHECK_THROWS_AS(fock_thermal(2.0, 2.0, 30), TruncationTooSevereError);
    CHECK_THROWS_AS(fock_thermal(1.0, 1.0, 1), TruncationTooSevereError);
  }
}

TEST_CASE("fock_unitary properties") {
  SUBCASE("identity at zero angle") {
    const FockOperator u = fock_unitary(FockUnitaryKind::BeamSplitter, 0.0, 10);
    CHECK((u.matrix - Eigen::MatrixXcd::Identity(100, 100)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("unitary defect in the low-photon block") {
    for (auto kind : {FockUnitaryKind::BeamSplitter, FockUnitaryKind::Squeezer}) {
      const FockOperator u = fock_unitary(kind, 0.4, 14);
      CHECK(unitary_defect_low_block(u) < 1e-10);
    }
  }
  SUBCASE("pi/2 beam splitter swaps |10> into |01> up to phase") {
    const int d = 10;
    const FockOperator u = fock_unitary(FockUnitaryKind::BeamSplitter, 0.5 * kPi, d);
    Eigen::VectorXcd ket10 = Eigen::VectorXcd::Zero(d * d);
    ket10(1 * d + 0) = 1.0;
    const Eigen::VectorXcd out = u.matrix * ket10;
    CHECK(std::abs(out(0 * d + 1)) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("squeezer calibration: vacuum variance matches cosh(2r)") {
    const int d = 26;
    const FockOperator rho = fock_probe({0.0, 0.0, 0.35, 0.0}, d);
    const Mat4 sigma = fock_covariance(rho);
    CHECK(sigma(0, 0) == doctest::Approx(std::cosh(0.7)).epsilon(1e-6));
    CHECK(sigma(0, 1) == doctest::Approx(std::sinh(0.7)).epsilon(1e-4));
  }
}

TEST_CASE("fock moments reproduce the conjugated covariance") {
  const ProbeParams p{0.6, 0.3, 0.3, 0.9};
  const FockOperator rho = fock_probe(p, 30);
  const Mat4 sigma = fock_covariance(rho);
  const Mat4 expect = build_probe(p).sigma;
  CHECK((sigma - expect).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("fock_fidelity sanity and analytic values") {
  SUBCASE("self fidelity up to the truncation deficit") {
    const FockOperator rho = fock_probe({0.5, 0.5, 0.2, 0.4}, 24);
    CHECK(fock_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-5));
  }
  SUBCASE("thermal single-mode pair") {
    const FockOperator a = fock_thermal(0.0, 0.3, 30);
    const FockOperator b = fock_thermal(1.0, 0.3, 30);
    CHECK(fock_fidelity(a, b) == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("matches the phase-space determinant formula") {
    const ProbeParams pa{0.8, 0.6, 0.3, 0.7};
    const ProbeParams pb{0.8, 0.6, 0.32, 0.74};
    const double f_fock = fock_fidelity(fock_probe(pa, 24), fock_probe(pb, 24));
    const double f_ps = uhlmann_fidelity(build_probe(pa), build_probe(pb)).value;
    CHECK(std::abs(f_fock - f_ps) < 1e-4);
  }
  SUBCASE("cutoff ladder converges") {
    const ProbeParams pa{1.0, 1.0, 0.3, 0.5};
    const ProbeParams pb{1.0, 1.0, 0.33, 0.55};
    double prev = -1.0;
    double last_change = 1.0;
    for (int cutoff : {15, 20, 25, 30}) {
      const double f = fock_probe_fidelity(pa, pb, cutoff);
      if (prev >= 0.0) last_change = std::abs(f - prev);
      prev = f;
    }
    CHECK(last_change < 1e-5);
    CHECK_NOTHROW(fock_probe_fidelity(pa, pb, 30, true));
  }
}

TEST_CASE("fock_qfi reference values") {
  SUBCASE("thermal occupation: 1/(nbar(nbar+1))") {
    const double q = fock_qfi({1.0, 1.0, 0.0, 0.0}, Parameter::Nbar, 1e-2, 30);
    CHECK(q == doctest::Approx(0.5).epsilon(1e-4));
  }
  SUBCASE("vanishing beam-splitter information for balanced unsqueezed inputs") {
    // the truncated oracle resolves zero at about its floor-correction level
    const double q = fock_qfi({1.0, 1.0, 0.0, kPi / 3.0}, Parameter::Phi, 1e-2, 24);
    CHECK(std::abs(q) < 2e-6);
  }
  SUBCASE("squeezing estimation matches the phase-space fidelity limit") {
    const ProbeParams p{1.0, 1.0, 0.2, 0.25 * kPi};
    const double q_fock = fock_qfi(p, Parameter::R, 1e-2, 26);
    const double q_ps = qfi_fidelity_limit(p, Parameter::R, CovarianceModel::Conjugated).value;
    CHECK(q_fock == doctest::Approx(q_ps).epsilon(1e-3));
  }
  SUBCASE("pure two-mode squeezed vacuum gives the constant squeezing QFI") {
    const double q = fock_qfi({0.0, 0.0, 0.3, 0.4}, Parameter::R, 1e-2, 26);
    CHECK(q == doctest::Approx(4.0).epsilon(2e-3));
  }
}

TEST_CASE("fock guards") {
  CHECK_THROWS_AS(fock_qfi({1.0, 1.0, 0.2, 0.3}, Parameter::R, 1e-7, 12), StepTooSmallError);
  CHECK_THROWS_AS(fock_thermal(-0.5, 0.0, 10), NegativeOccupationError);
}
