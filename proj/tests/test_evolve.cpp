#include <doctest.h>

#include <random>

#include "nlsrad/evolve.hpp"
#include "nlsrad/ground_state.hpp"
#include "support.hpp"

using namespace nlsrad;
using namespace testing_support;

TEST_CASE("step preserves mass to round-off") {
  const auto g = build_grid(1024, 16.0);
  std::mt19937_64 rng(2);
  auto u = random_field(g, rng);
  const double m0 = l2_norm_sq(u);
  for (int k = 0; k < 100; ++k) u = step(u, 5e-3, EquationParams{});
  CHECK(std::abs(l2_norm_sq(u) - m0) <= 1e-12 * m0);
}

TEST_CASE("Strang step has second-order local error") {
  // Coarse grid keeps dt / h^2 small.
  const auto g = build_grid(256, 16.0);
  const EquationParams p;
  const auto u0 = gaussian(g, 1.5);
  auto distance = [&](double dt) {
    const auto big = step(u0, 2 * dt, p);
    const auto small = step(step(u0, dt, p), dt, p);
    double d = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) d += g.weight(j) * std::norm(big[j] - small[j]);
    return std::sqrt(d);
  };
  // Doubling error of a second-order method scales like dt^3.
  const double ratio = distance(2e-4) / distance(1e-4);
  CHECK(ratio == doctest::Approx(8.0).epsilon(0.15));
}

TEST_CASE("energy drift is small on a dispersing datum") {
  const auto g = build_grid(2048, 32.0);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.local_tol = 1e-8;
  const auto tr = run(gaussian(g, 0.5), cfg, EquationParams{});
  REQUIRE_FALSE(tr.energy_drift.empty());
  for (double d : tr.energy_drift) CHECK(std::abs(d) < 1e-5);
  for (double d : tr.mass_drift) CHECK(std::abs(d) < 1e-10);
}

TEST_CASE("absorbing layer only removes mass") {
  const auto g = build_grid(2048, 64.0);
  EvolutionConfig cfg;
  cfg.dt = 5e-3;
  cfg.t_end = 10.0;
  cfg.absorb = true;
  cfg.monitor_every = 5;
  cfg.decay_window = 100.0;
  const auto tr = run(gaussian(g, 0.5), cfg, EquationParams{});
  for (std::size_t i = 1; i < tr.mass_drift.size(); ++i) {
    CHECK(tr.mass_drift[i] <= tr.mass_drift[i - 1] + 1e-13);
  }
  CHECK(tr.mass_drift.back() < -1e-3);
}

TEST_CASE("absorbing profile shape") {
  const auto g = build_grid(512, 32.0);
  const auto w = absorbing_profile(g, 8.0, 5.0);
  CHECK(w[0] == 0.0);
  CHECK(w[g.n() / 2] == 0.0);
  CHECK(w.back() > 4.5);
  CHECK(w.back() <= 5.0);
  for (std::size_t j = 1; j < w.size(); ++j) CHECK(w[j] >= w[j - 1]);
}

TEST_CASE("configuration checks") {
  const auto g = build_grid(256, 16.0);
  EvolutionConfig cfg;
  CHECK_NOTHROW(validate(cfg, g));
  cfg.dt = 1.0;
  CHECK_THROWS_AS(validate(cfg, g), Error);
  cfg = EvolutionConfig{};
  cfg.absorb = true;
  cfg.absorb_width = 4.0;
  CHECK_THROWS_AS(validate(cfg, g), Error);
  cfg = EvolutionConfig{};
  cfg.t_end = -1.0;
  CHECK_THROWS_AS(validate(cfg, g), Error);
  cfg = EvolutionConfig{};
  cfg.monitor_every = 0;
  CHECK_THROWS_AS(validate(cfg, g), Error);
}

TEST_CASE("outcome names") {
  CHECK(to_string(Outcome::kRanToEnd) == "ran_to_t_end");
  CHECK(to_string(Outcome::kBlowupDetected) == "blowup_detected");
  CHECK(to_string(Outcome::kDecayDetected) == "decay_detected");
  CHECK(to_string(Outcome::kAborted) == "aborted");
}

TEST_CASE("K lower bound holds for a small multiple of the ground state") {
  const auto g = build_grid(1024, 16.0);
  const auto q = minimize_quotient(EquationParams{}, g);
  REQUIRE(q.converged);
  const auto u = 0.1 * q.profile;
  const double s0 = report(u, EquationParams{}).action;
  CHECK(monitor_k_bound(u, s0, q.level, EquationParams{}));
  // A datum far above the level with negative K fails the bound.
  const auto big = 2.0 * q.profile;
  CHECK_FALSE(monitor_k_bound(big, s0, q.level, EquationParams{}));
}

TEST_CASE("snapshot hook sees every monitor tick") {
  const auto g = build_grid(512, 16.0);
  EvolutionConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 0.5;
  cfg.adaptive = false;
  cfg.monitor_every = 5;
  int calls = 0;
  Evolver ev(g, EquationParams{}, cfg);
  const auto tr = ev.run(gaussian(g, 0.3), [&](double, const RadialField&) { ++calls; });
  CHECK(calls == static_cast<int>(tr.times.size()));
  CHECK(tr.final_time == doctest::Approx(0.5));
}
