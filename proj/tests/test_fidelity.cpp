#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "gqfi/fidelity.hpp"
#include "gqfi/channels.hpp"

using namespace gqfi;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Fidelity of two single-mode thermal states from the Fock-basis series:
// F = 1 / (sqrt((n1+1)(n2+1)) - sqrt(n1 n2))^2.
double thermal_fidelity(double n1, double n2) {
  const double root = std::sqrt((n1 + 1.0) * (n2 + 1.0)) - std::sqrt(n1 * n2);
  return 1.0 / (root * root);
}

ProbeParams random_params(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> un(0.05, 3.0), ur(0.0, 0.9), up(0.0, kPi);
  return {un(gen), un(gen), ur(gen), up(gen)};
}
}  // namespace

TEST_CASE("self fidelity is one") {
  const GaussianState s = build_probe({1.0, 1.0, 0.3, 0.4});
  CHECK(uhlmann_fidelity(s, s).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bures_distance(s, s) == doctest::Approx(0.0));
}

TEST_CASE("thermal-pair values from the Fock series") {
  // two-mode products factorize into per-mode thermal fidelities
  const GaussianState a = thermal_state(0.0, 0.0);
  const GaussianState b = thermal_state(1.0, 0.0);
  CHECK(uhlmann_fidelity(a, b).value == doctest::Approx(0.5).epsilon(1e-12));

  const GaussianState c = thermal_state(0.7, 2.0);
  const GaussianState d = thermal_state(1.3, 0.4);
  CHECK(uhlmann_fidelity(c, d).value ==
        doctest::Approx(thermal_fidelity(0.7, 1.3) * thermal_fidelity(2.0, 0.4))
            .epsilon(1e-12));
}

TEST_CASE("displacement factor matches coherent-state overlap") {
  // |<alpha|beta>|^2 = exp(-|alpha-beta|^2); displacement (2 Re a, 0, 2 Im a, 0)
  GaussianState vac1, vac2;
  const std::complex<double> alpha(0.3, 0.2);
  vac1.d << 2.0 * alpha.real(), 0.0, 2.0 * alpha.imag(), 0.0;
  const auto fb = uhlmann_fidelity(vac1, vac2);
  CHECK(fb.value == doctest::Approx(std::exp(-std::norm(alpha))).epsilon(1e-12));
  CHECK(fb.gaussian_exponent == doctest::Approx(-std::norm(alpha)).epsilon(1e-12));
}

TEST_CASE("symmetry, range and unitary invariance on random pairs") {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 500; ++i) {
    const GaussianState s1 = build_probe(random_params(gen));
    const GaussianState s2 = build_probe(random_params(gen));
    const double f12 = uhlmann_fidelity(s1, s2).value;
    const double f21 = uhlmann_fidelity(s2, s1).value;
    CHECK(std::abs(f12 - f21) < 1e-12);
    CHECK(f12 > 0.0);
    CHECK(f12 <= 1.0);

    // same symplectic applied to both states leaves the fidelity unchanged
    const SymplecticMatrix m = beam_splitter(0.37);
    const SymplecticMatrix sq = two_mode_squeezer(0.21);
    GaussianState t1 = apply_symplectic(apply_symplectic(s1, sq), m);
    GaussianState t2 = apply_symplectic(apply_symplectic(s2, sq), m);
    CHECK(uhlmann_fidelity(t1, t2).value == doctest::Approx(f12).epsilon(1e-10));
  }
}

TEST_CASE("bures distance") {
  const GaussianState a = thermal_state(0.0, 0.0);
  // F = 0.25 pair gives d_BD = 1: vacuum vs thermal(3) single mode is 1/4
  const GaussianState b = thermal_state(3.0, 0.0);
  CHECK(uhlmann_fidelity(a, b).value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(bures_distance(a, b) == doctest::Approx(1.0).epsilon(1e-12));

  // metric triangle inequality on random triples
  std::mt19937_64 gen(41);
  for (int i = 0; i < 25; ++i) {
    const GaussianState x = build_probe(random_params(gen));
    const GaussianState y = build_probe(random_params(gen));
    const GaussianState z = build_probe(random_params(gen));
    CHECK(bures_distance(x, z) <= bures_distance(x, y) + bures_distance(y, z) + 1e-10);
  }
}

TEST_CASE("local monotonicity along a parameter ray") {
  const ProbeParams ref{1.0, 1.5, 0.3, 0.8};
  const GaussianState s0 = build_probe(ref);
  double prev = 1.0 + 1e-12;
  for (int k = 1; k <= 8; ++k) {
    ProbeParams p = ref;
    p.r += 0.05 * k;
    const double f = uhlmann_fidelity(s0, build_probe(p)).value;
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("ordering mismatch is rejected") {
  const GaussianState a = thermal_state(1.0, 1.0);
  const GaussianState b = convert_ordering(a, ModeOrdering::QPQP);
  CHECK_THROWS_AS(uhlmann_fidelity(a, b), OrderingMismatchError);
}

TEST_CASE("single-mode fidelity") {
  SingleModeState v;                 // vacuum
  SingleModeState t;
  t.sigma = 3.0 * Mat2::Identity();  // thermal nbar = 1
  CHECK(uhlmann_fidelity_single_mode(v, t) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(uhlmann_fidelity_single_mode(t, t) == doctest::Approx(1.0).epsilon(1e-12));

  SingleModeState t2;
  t2.sigma = 5.0 * Mat2::Identity();
  CHECK(uhlmann_fidelity_single_mode(t, t2) ==
        doctest::Approx(thermal_fidelity(1.0, 2.0)).epsilon(1e-12));
}

TEST_CASE("well separated states keep a small positive fidelity") {
  const GaussianState a = thermal_state(0.0, 0.0);
  const GaussianState hot = thermal_state(200.0, 200.0);
  const double f = uhlmann_fidelity(a, hot).value;
  CHECK(f > 0.0);
  CHECK(f < 1e-3);
}
