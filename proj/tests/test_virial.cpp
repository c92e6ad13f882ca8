#include <doctest.h>

#include <random>

#include "nlsrad/ground_state.hpp"
#include "nlsrad/virial.hpp"
#include "support.hpp"

using namespace nlsrad;
using namespace testing_support;

TEST_CASE("cutoff profile values") {
  const auto a = cutoff_profile(0.5);
  CHECK(a[0] == doctest::Approx(0.25));
  CHECK(a[1] == doctest::Approx(1.0));
  CHECK(a[2] == doctest::Approx(2.0));
  const auto b = cutoff_profile(3.5);
  CHECK(b[0] == doctest::Approx(kCutoffPlateau));
  CHECK(b[1] == 0.0);
  CHECK(b[2] == 0.0);
}

TEST_CASE("cutoff profile is smooth at the junctions") {
  const double eps = 1e-9;
  for (double s : {1.0, 3.0}) {
    const auto lo = cutoff_profile(s - eps);
    const auto hi = cutoff_profile(s + eps);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(lo[k] - hi[k]) < 1e-6);
  }
}

TEST_CASE("cutoff second derivative never exceeds 2") {
  for (int i = 0; i <= 40000; ++i) {
    const double s = 4.0 * i / 40000.0;
    CHECK(cutoff_profile(s)[2] <= 2.0 + 1e-12);
  }
  CHECK(cutoff_profile(2.0)[1] > 0.0);
}

TEST_CASE("build_cutoff domain checks") {
  const auto g = build_grid(512, 16.0);
  CHECK_THROWS_AS(build_cutoff(6.0, g), Error);
  CHECK_THROWS_AS(build_cutoff(0.0, g), Error);
  CHECK_NOTHROW(build_cutoff(5.0, g));
}

TEST_CASE("localized second moment") {
  const auto g = build_grid(4096, 64.0);
  CHECK(i_value(RadialField(g), build_cutoff(10.0, g)) == 0.0);
  const auto f = gaussian(g);
  // int r^2 exp(-2 r^2) dx = 3/4 * mass
  CHECK(rel(i_value(f, build_cutoff(20.0, g)), 0.75 * gaussian_mass()) < 1e-6);
  double prev = 0.0;
  for (double R : {0.5, 1.0, 2.0, 4.0}) {
    const double v = i_value(f, build_cutoff(R, g));
    CHECK(v > prev);
    prev = v;
  }
  CHECK(i_prime(f, build_cutoff(2.0, g)) == 0.0);
}

TEST_CASE("I'' equals 4 K when the support sits inside the quadratic zone") {
  const auto g = build_grid(8192, 64.0);
  const EquationParams p;
  const auto f = RadialField::from_function(g, [](double r) {
    const double s = r / 3.0;
    return Complex{s < 1.0 ? std::pow(1.0 - s * s, 4) : 0.0, 0.0};
  });
  const auto t = i_double_prime(f, build_cutoff(5.0, g), p);
  CHECK(std::abs(t.r1) + std::abs(t.r2) + std::abs(t.r3) + std::abs(t.r4) < 1e-12 * std::abs(t.k_gamma));
  CHECK(t.decomposition == doctest::Approx(4.0 * virial(f, p)).epsilon(1e-12));
}

TEST_CASE("formula and decomposition of I'' agree") {
  const auto g = build_grid(2048, 32.0);
  const EquationParams p{1.0, 1.3, 1.0};
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_field(g, rng);
    for (double R : {0.7, 1.5, 3.0}) {
      const auto t = i_double_prime(f, build_cutoff(R, g), p);
      const double scale = report(f, p).h1_omega_gamma_sq + l4_norm_4(f);
      CHECK(std::abs(t.formula - t.decomposition) <= 1e-10 * scale);
      CHECK(t.k_gamma == doctest::Approx(virial(f, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("remainder is bounded by the tail") {
  const auto g = build_grid(2048, 64.0);
  const EquationParams p;
  const double C = remainder_constant(p);
  CHECK(C > 0.0);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_field(g, rng, 1.5);
    for (double R : {1.0, 1.5, 2.5}) {
      const auto t = i_double_prime(f, build_cutoff(R, g), p);
      const double rem = t.r1 + t.r2 + t.r3 + t.r4;
      CHECK(std::abs(rem) <= C * tail_integral(f, R, p) + 1e-12);
    }
  }
}

TEST_CASE("tail integral shrinks with R") {
  const auto g = build_grid(1024, 32.0);
  const auto f = gaussian(g);
  const EquationParams p;
  CHECK(tail_integral(f, 1.0, p) > tail_integral(f, 2.0, p));
  CHECK(tail_integral(f, 6.0, p) < 1e-10);
}

TEST_CASE("rigidity probe preconditions") {
  const auto g = build_grid(512, 8.0);
  const auto q = minimize_quotient(EquationParams{}, g);
  REQUIRE(q.converged);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  CHECK_THROWS_AS(rigidity_probe(1.1 * q.profile, EquationParams{}, q.level, cfg), Error);
  CHECK_THROWS_AS(rigidity_probe(2.0 * q.profile, EquationParams{}, q.level, cfg), Error);
  try {
    rigidity_probe(0.9 * q.profile, EquationParams{}, q.level, cfg);
    FAIL("expected the tail criterion to be unsatisfiable on R_max = 8");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfig);
  }
}
