// Acceptance gate: one PASS/FAIL line per criterion. Tolerances are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nlsrad/classify.hpp"
#include "nlsrad/evolve.hpp"
#include "nlsrad/functionals.hpp"
#include "nlsrad/ground_state.hpp"
#include "nlsrad/virial.hpp"
#include "support.hpp"

using namespace nlsrad;
using testing_support::random_field;

namespace {

const EquationParams kParams{1.0, 1.0, 1.0};

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const GroundStateResult& ground(std::size_t n, double r_max) {
  static std::map<std::pair<std::size_t, double>, GroundStateResult> cache;
  const auto key = std::make_pair(n, r_max);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, minimize_quotient(kParams, build_grid(n, r_max))).first;
  }
  return it->second;
}

// Scaling derivative against central differences of the action.
Result c1() {
  // Resampling jitter in the rescaled action decays like h^2.
  const auto g = build_grid(65536, 32.0);
  std::mt19937_64 rng(101);
  const ScalingPair pairs[] = {{1, 0}, {3, 2}, {2, 1}, {3, 0}};
  double worst_acc = 0.0, lo_order = 1e9, hi_order = -1e9;
  int order_samples = 0;
  for (int i = 0; i < 20; ++i) {
    const auto f = random_field(g, rng);
    for (const auto& pair : pairs) {
      const auto a = fd_check_k(f, pair, kParams, 2e-3);
      worst_acc = std::max(worst_acc, std::abs(a.finite_difference - a.analytic) /
                                          (1.0 + std::abs(a.analytic)));
      const auto e1 = fd_check_k(f, pair, kParams, 1e-2);
      const auto e2 = fd_check_k(f, pair, kParams, 5e-3);
      const double d1 = e1.finite_difference - e1.analytic;
      const double d2 = e2.finite_difference - e2.analytic;
      // Pairs whose eps^2 coefficient nearly vanishes carry no order information.
      if (std::abs(d1) < 1e-6 * (1.0 + std::abs(e1.analytic))) continue;
      const double order = std::log2(std::abs(d1 / d2));
      lo_order = std::min(lo_order, order);
      hi_order = std::max(hi_order, order);
      ++order_samples;
    }
  }
  const bool pass = worst_acc <= 1e-4 && order_samples >= 60 && lo_order >= 1.8 && hi_order <= 2.2;
  return {pass, fmt("max |k - fd|/(1+|k|) = %.2e (tol 1e-4), Richardson order in [%.3f, %.3f] over %g samples",
                    worst_acc, lo_order, hi_order, order_samples)};
}

// Descent against shooting, Pohozaev residuals.
Result c2() {
  const auto& q = ground(4096, 32.0);
  const auto shot = shoot_ode(kParams, q.profile.grid, {1.0, 10.0});
  const double level_err = std::abs(q.level - shot.level) / shot.level;
  const double h1 = q.functionals.h1_omega_gamma_sq;
  double worst_k = 0.0;
  const ScalingPair pairs[] = {{1, 0}, {3, 2}, {2, 1}, {3, 0}};
  for (const auto& pair : pairs) {
    worst_k = std::max(worst_k, std::abs(k_alpha_beta(q.profile, pair, kParams)) / h1);
  }
  const bool pass = q.converged && shot.converged && level_err <= 1e-3 && worst_k <= 1e-4;
  return {pass, fmt("descent %.8f, shooting %.8f, rel diff %.2e (tol 1e-3); max |K|/h1 = %.2e (tol 1e-4)",
                    q.level, shot.level, level_err, worst_k)};
}

// Frequency scaling of the free ground state.
Result c3() {
  const auto g = build_grid(4096, 32.0);
  GroundStateOptions opts;
  opts.allow_free_limit = true;
  const auto q1 = minimize_quotient(EquationParams{0.0, 1.0, 1.0}, g, opts);
  bool pass = q1.converged;
  std::string detail;
  for (double omega : {0.5, 2.0}) {
    const auto qw = minimize_quotient(EquationParams{0.0, 1.0, omega}, g, opts);
    const double ratio = qw.level / q1.level;
    const double err = std::abs(ratio / std::sqrt(omega) - 1.0);
    pass = pass && qw.converged && err <= 1e-3;
    detail += fmt("omega %.1f: ratio %.6f vs %.6f (rel %.1e); ", omega, ratio, std::sqrt(omega), err);
  }
  return {pass, detail + "tol 1e-3"};
}

// Mass and energy conservation along 0.9 Q.
Result c4() {
  const auto& q = ground(4096, 32.0);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.local_tol = 1e-8;
  cfg.monitor_every = 10;
  const auto tr = run(0.9 * q.profile, cfg, kParams);
  double md = 0.0, ed = 0.0;
  for (double d : tr.mass_drift) md = std::max(md, std::abs(d));
  for (double d : tr.energy_drift) ed = std::max(ed, std::abs(d));
  const bool pass = tr.outcome == Outcome::kRanToEnd && md <= 1e-8 && ed <= 1e-6;
  return {pass, fmt("max mass drift %.2e (tol 1e-8), max energy drift %.2e (tol 1e-6), %g steps",
                    md, ed, tr.steps)};
}

// The ground state as a standing wave.
Result c5() {
  const auto& q = ground(1024, 16.0);
  const auto& g = q.profile.grid;
  EvolutionConfig cfg;
  cfg.dt = 1.5e-6;
  cfg.t_end = 1.0;
  cfg.adaptive = false;
  cfg.monitor_every = 10000;
  const double qn = std::sqrt(l2_norm_sq(q.profile));
  double worst = 0.0, last_phase = 0.0, unwrapped = 0.0, last_t = 0.0;
  Evolver(g, kParams, cfg).run(q.profile, [&](double t, const RadialField& u) {
    double dev = 0.0;
    Complex overlap{};
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double qj = q.profile[j].real();
      dev += g.weight(j) * std::pow(std::abs(u[j]) - qj, 2);
      overlap += g.weight(j) * qj * u[j];
    }
    worst = std::max(worst, std::sqrt(dev) / qn);
    double step = std::arg(overlap) - last_phase;
    while (step > kPi) step -= 2 * kPi;
    while (step < -kPi) step += 2 * kPi;
    unwrapped += step;
    last_phase = std::arg(overlap);
    last_t = t;
  });
  const double rate = unwrapped / last_t;
  const double rate_err = std::abs(rate / kParams.omega - 1.0);
  const bool pass = last_t > 0.999 && worst <= 1e-4 && rate_err <= 1e-2;
  return {pass, fmt("max ||u|-Q|/|Q| = %.2e (tol 1e-4), phase rate %.5f vs omega %.1f (rel %.1e, tol 1e-2)",
                    worst, rate, kParams.omega, rate_err)};
}

EvolutionConfig decay_config() {
  EvolutionConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 20.0;
  cfg.monitor_every = 100;
  cfg.absorb_width = 15.0;
  return cfg;
}

EvolutionConfig blowup_config() {
  EvolutionConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 5.0;
  cfg.monitor_every = 20;
  return cfg;
}

// Dichotomy along c Q: scatter rows on a wide absorbing domain, blow-up rows
// on a compact one.
Result c6() {
  bool pass = true;
  std::string detail;
  for (double c : {0.5, 0.7, 0.9, 1.1, 1.2}) {
    const bool scatter_row = c < 1.0;
    const auto& q = scatter_row ? ground(4096, 64.0) : ground(2048, 16.0);
    const auto u0 = c * q.profile;
    auto v = classify(u0, kParams, q);
    v = verify_empirically(v, u0, scatter_row ? decay_config() : blowup_config(), kParams);
    const bool row_ok = agrees(v) &&
                        v.predicted == (scatter_row ? Prediction::kScatter : Prediction::kBlowup);
    pass = pass && row_ok;
    detail += fmt("c=%.1f ", c) + to_string(v.predicted) + "/" + to_string(v.empirical) + "; ";
  }
  return {pass, detail + "predicted/empirical"};
}

// K floor along the 0.9 Q decay run.
Result c7() {
  const auto& q = ground(4096, 64.0);
  const auto u0 = 0.9 * q.profile;
  auto cfg = decay_config();
  cfg.absorb = true;
  cfg.level = q.level;
  const auto tr = run(u0, cfg, kParams);
  const double s0 = report(u0, kParams).action;
  std::size_t violations = 0;
  double min_k = 1e300;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    if (!tr.k_lower_bound_ok[i]) ++violations;
    min_k = std::min(min_k, tr.virial_k[i]);
  }
  const bool pass = violations == 0 && !tr.times.empty();
  return {pass, fmt("%g monitored times, %g violations (tol 1e-6), min K = %.4f, r - S0 = %.4f",
                    static_cast<double>(tr.times.size()), static_cast<double>(violations), min_k,
                    q.level - s0)};
}

// Localized virial identity along 0.9 Q.
Result c8() {
  const auto& q = ground(8192, 128.0);
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.adaptive = false;
  cfg.monitor_every = 1;
  const auto rep = rigidity_probe(0.9 * q.profile, kParams, q.level, cfg);
  const double h = q.profile.grid.h();
  const double tol2 = std::max(1e-3, 10 * cfg.dt * cfg.dt + 10 * h * h);
  double worst2 = 0.0, worst_form = 0.0;
  for (std::size_t i = 0; i < rep.ticks.size(); ++i) {
    const auto& t = rep.ticks[i].terms;
    worst_form = std::max(worst_form, std::abs(t.formula - t.decomposition) / std::abs(t.formula));
    if (i == 0 || i + 1 == rep.ticks.size()) continue;
    const double d2 = (rep.ticks[i + 1].i - 2 * rep.ticks[i].i + rep.ticks[i - 1].i) / (cfg.dt * cfg.dt);
    worst2 = std::max(worst2, std::abs(d2 - t.formula) / std::abs(t.formula));
  }
  const bool pass = rep.ticks.size() > 100 && worst2 <= tol2 && worst_form <= 1e-10 &&
                    rep.min_ipp > 0.0 && rep.bound_ok;
  return {pass, fmt("second difference rel err %.2e (tol %.2e), forms agree to %.1e (tol 1e-10), min I'' = %.2f",
                    worst2, tol2, worst_form, rep.min_ipp) +
                    fmt(" at R = %.2f", rep.R)};
}

// Sign unanimity below the threshold.
Result c9() {
  const auto& q = ground(4096, 32.0);
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> scale(0.1, 3.0);
  std::vector<RadialField> fields;
  int positive = 0, negative = 0, drawn = 0;
  while (fields.size() < 100 && drawn < 100000) {
    ++drawn;
    auto f = random_field(q.profile.grid, rng, scale(rng));
    if (!(report(f, kParams).action < q.level)) continue;
    (virial(f, kParams) >= 0.0 ? positive : negative)++;
    fields.push_back(std::move(f));
  }
  const auto rep = sign_splitting_check(fields, kParams, q);
  const bool pass = fields.size() == 100 && rep.checked == 100 && rep.violations.empty();
  return {pass, fmt("%g fields (%g with K >= 0, %g with K < 0), %g violations", static_cast<double>(rep.checked),
                    positive, negative, static_cast<double>(rep.violations.size()))};
}

// Two-sided equivalence of the H1 norm and the action for K >= 0.
Result c10() {
  const auto g = build_grid(4096, 32.0);
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> scale(0.1, 3.0);
  const auto& pairs = default_pairs();
  int accepted = 0, violations = 0, drawn = 0;
  double worst = -1e300;
  while (accepted < 100 && drawn < 100000) {
    ++drawn;
    const auto f = random_field(g, rng, scale(rng));
    const auto rep = report(f, kParams);
    const auto& pair = pairs[drawn % pairs.size()];
    if (k_alpha_beta(rep, pair, kParams) < 0.0) continue;
    ++accepted;
    const double d = pair.alpha - pair.beta;
    const double lo = 2 * d * rep.action - d * rep.h1_omega_gamma_sq;
    const double hi = d * rep.h1_omega_gamma_sq - (4 * pair.alpha - 3 * pair.beta) * rep.action;
    const double scale_ref = d * rep.h1_omega_gamma_sq;
    worst = std::max({worst, lo / scale_ref, hi / scale_ref});
    if (lo > 1e-10 * scale_ref || hi > 1e-10 * scale_ref) ++violations;
  }
  const bool pass = accepted == 100 && violations == 0;
  return {pass, fmt("%g fields, %g violations, largest signed excess %.2e (tol 1e-10)",
                    accepted, violations, worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"C1 scaling derivatives", c1},   {"C2 ground state cross-check", c2},
      {"C3 free scaling law", c3},      {"C4 conservation", c4},
      {"C5 standing wave", c5},         {"C6 dichotomy", c6},
      {"C7 K floor", c7},               {"C8 virial identity", c8},
      {"C9 sign unanimity", c9},        {"C10 H1 equivalence", c10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!r.pass) ++failed;
    std::printf("[%s] %s: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", name.c_str(), r.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
