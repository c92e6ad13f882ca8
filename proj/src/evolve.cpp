#include "nlsrad/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlsrad {

void validate(const EvolutionConfig& cfg, const RadialGrid& grid) {
  if (!(cfg.dt > 0.0)) fail(ErrorKind::kConfig, "dt must be positive");
  if (cfg.dt > grid.h()) fail(ErrorKind::kConfig, "dt must not exceed the grid spacing h");
  if (!(cfg.t_end > 0.0)) fail(ErrorKind::kConfig, "t_end must be positive");
  if (cfg.monitor_every < 1) fail(ErrorKind::kConfig, "monitor_every must be >= 1");
  if (cfg.absorb && !(cfg.absorb_width > 0.0 && cfg.absorb_width < grid.r_max() / 4.0)) {
    fail(ErrorKind::kConfig, "absorb_width must lie in (0, R_max/4)");
  }
  if (cfg.absorb && !(cfg.absorb_strength > 0.0)) {
    fail(ErrorKind::kConfig, "absorb_strength must be positive");
  }
  if (!(cfg.blowup_grad_factor > 1.0)) {
    fail(ErrorKind::kConfig, "blowup_grad_factor must exceed 1");
  }
  if (!(cfg.decay_window > 0.0)) fail(ErrorKind::kConfig, "decay_window must be positive");
  if (!(cfg.local_tol > 0.0)) fail(ErrorKind::kConfig, "local_tol must be positive");
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kRanToEnd: return "ran_to_t_end";
    case Outcome::kBlowupDetected: return "blowup_detected";
    case Outcome::kDecayDetected: return "decay_detected";
    case Outcome::kAborted: return "aborted";
  }
  return "unknown";
}

namespace {

void nonlinear_phase(std::span<Complex> u, double tau) {
  for (auto& v : u) {
    const double phase = tau * std::norm(v);
    v *= Complex{std::cos(phase), std::sin(phase)};
  }
}

double relative_l2_distance(const RadialField& a, const RadialField& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double w = a.grid.weight(j);
    num += w * std::norm(a[j] - b[j]);
    den += w * std::norm(b[j]);
  }
  if (!(den > 0.0)) return num > 0.0 ? INFINITY : 0.0;
  return std::sqrt(num / den);
}

bool all_finite(const RadialField& u) {
  for (const auto& v : u.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

}  // namespace

RadialField step(const RadialField& u, double dt, const EquationParams& params) {
  u.check_finite();
  CrankNicolson cn(u.grid, params);
  RadialField v = u;
  std::span<Complex> s(v.values);
  nonlinear_phase(s, 0.5 * dt);
  cn.propagate(s, dt);
  nonlinear_phase(s, 0.5 * dt);
  return v;
}

bool monitor_k_bound(const FunctionalReport& rep, double s0, double level,
                     const EquationParams& params, double tol) {
  const double k = k_alpha_beta(rep, kVirialPair, params);
  const double floor =
      std::min(level - s0, 2.0 * params.mu / 7.0 * rep.sobolev_gamma_sq);
  return k >= floor - tol;
}

bool monitor_k_bound(const RadialField& u_t, double s0, double level,
                     const EquationParams& params, double tol) {
  return monitor_k_bound(report(u_t, params), s0, level, params, tol);
}

std::vector<double> absorbing_profile(const RadialGrid& grid, double width, double strength) {
  std::vector<double> w(grid.n(), 0.0);
  const double start = grid.r_max() - width;
  for (std::size_t j = 0; j < grid.n(); ++j) {
    const double r = grid.node(j);
    if (r <= start) continue;
    const double s = (r - start) / width;
    w[j] = strength * s * s * s;
  }
  return w;
}

Evolver::Evolver(const RadialGrid& grid, const EquationParams& params,
                 const EvolutionConfig& cfg)
    : grid_(grid),
      params_(params),
      cfg_(cfg),
      cn_(grid, params,
          cfg.absorb ? absorbing_profile(grid, cfg.absorb_width, cfg.absorb_strength)
                     : std::vector<double>{}) {
  validate(cfg, grid);
}

void Evolver::advance(RadialField& u, double dt) const {
  std::span<Complex> s(u.values);
  nonlinear_phase(s, 0.5 * dt);
  cn_.propagate(s, dt);
  nonlinear_phase(s, 0.5 * dt);
}

bool Evolver::integrate(RadialField& u, double& t, double t_target, double& dt,
                        double dt_max, EvolutionTrace& trace) const {
  constexpr double kMinDt = 1e-12;
  while (t_target - t > 1e-14 * std::max(1.0, t_target)) {
    const double h = std::min(dt, t_target - t);
    if (!cfg_.adaptive) {
      // Fixed steps; adjacent nonlinear half-phases are merged.
      const double span = t_target - t;
      const auto m = static_cast<long>(std::ceil(span / dt - 1e-9));
      const double hm = span / static_cast<double>(m);
      std::span<Complex> s(u.values);
      nonlinear_phase(s, 0.5 * hm);
      for (long k = 0; k < m; ++k) {
        cn_.propagate(s, hm);
        nonlinear_phase(s, k + 1 == m ? 0.5 * hm : hm);
      }
      if (!all_finite(u)) return false;
      t = t_target;
      trace.steps += static_cast<int>(m);
      trace.min_dt = trace.min_dt == 0.0 ? hm : std::min(trace.min_dt, hm);
      continue;
    }
    RadialField full = u;
    advance(full, h);
    RadialField half = u;
    advance(half, 0.5 * h);
    advance(half, 0.5 * h);
    if (!all_finite(full) || !all_finite(half)) {
      u = half;
      return false;
    }
    const double err = relative_l2_distance(full, half);
    if (err > cfg_.local_tol) {
      dt = 0.5 * h;
      ++trace.rejected;
      if (dt < kMinDt) return false;
      continue;
    }
    u = std::move(half);
    t += h;
    ++trace.steps;
    if (h == dt) trace.min_dt = trace.min_dt == 0.0 ? h : std::min(trace.min_dt, h);
    if (err < cfg_.local_tol / 32.0 && dt < dt_max) dt = std::min(dt_max, 2.0 * dt);
  }
  return true;
}

EvolutionTrace Evolver::run(const RadialField& u0, const SnapshotHook& hook) const {
  require(u0.grid == grid_, ErrorKind::kPrecondition, "initial datum lives on another grid");
  u0.check_finite();

  EvolutionTrace trace;
  const auto rep0 = report(u0, params_);
  const double mass0 = rep0.mass;
  const double energy0 = rep0.energy;
  const double grad0 = std::sqrt(rep0.kinetic);
  const double s0 = rep0.action;
  const double energy_scale = std::abs(energy0) > 0.0 ? std::abs(energy0) : 1.0;
  const double mass_scale = mass0 > 0.0 ? mass0 : 1.0;

  auto record = [&](double t, const RadialField& u) {
    const auto rep = report(u, params_);
    trace.times.push_back(t);
    trace.mass_drift.push_back((rep.mass - mass0) / mass_scale);
    trace.energy_drift.push_back((rep.energy - energy0) / energy_scale);
    trace.l4_norm.push_back(std::pow(rep.quartic, 0.25));
    trace.grad_norm.push_back(std::sqrt(rep.kinetic));
    const double k = k_alpha_beta(rep, kVirialPair, params_);
    trace.virial_k.push_back(k);
    trace.k_lower_bound_ok.push_back(cfg_.level ? monitor_k_bound(rep, s0, *cfg_.level, params_)
                                                : k >= 0.0);
    if (hook) hook(t, u);
  };

  // Trailing window of L4 samples decreasing (5% ripple allowed, 5% net
  // decrease required) while K_gamma stays above its floor.
  auto decay_detected = [&]() {
    const double t_now = trace.times.back();
    if (t_now < cfg_.decay_window) return false;
    std::size_t first = trace.times.size() - 1;
    while (first > 0 && trace.times[first - 1] >= t_now - cfg_.decay_window - 1e-12) --first;
    if (trace.times.size() - first < 3) return false;
    double running_min = trace.l4_norm[first];
    for (std::size_t i = first; i < trace.times.size(); ++i) {
      if (trace.l4_norm[i] > 1.05 * running_min) return false;
      running_min = std::min(running_min, trace.l4_norm[i]);
      if (!trace.k_lower_bound_ok[i] || !(trace.virial_k[i] > 0.0)) return false;
    }
    return trace.l4_norm.back() <= 0.95 * trace.l4_norm[first];
  };

  RadialField u = u0;
  double t = 0.0;
  double dt = cfg_.dt;
  record(t, u);
  const double tick = cfg_.monitor_every * cfg_.dt;

  RadialField checkpoint = u;
  double checkpoint_t = 0.0;
  double checkpoint_dt = dt;

  while (cfg_.t_end - t > 1e-12 * cfg_.t_end) {
    const double t_target = std::min(cfg_.t_end, checkpoint_t + tick);
    const bool ok = integrate(u, t, t_target, dt, cfg_.dt, trace);
    if (!ok) {
      if (!all_finite(u)) {
        trace.outcome = Outcome::kBlowupDetected;
        trace.note = "non-finite state";
      } else {
        trace.outcome = Outcome::kAborted;
        trace.note = "time step underflow without blow-up confirmation";
      }
      break;
    }
    record(t, u);

    const double grad = trace.grad_norm.back();
    if (grad > cfg_.blowup_grad_factor * grad0) {
      // Confirm by repeating the last interval with half the step bound.
      RadialField redo = checkpoint;
      double t_redo = checkpoint_t;
      double dt_redo = 0.5 * checkpoint_dt;
      EvolutionTrace scratch;
      const bool redo_ok = integrate(redo, t_redo, t, dt_redo, 0.5 * cfg_.dt, scratch);
      const double grad_redo = redo_ok ? std::sqrt(gradient_norm_sq(redo)) : INFINITY;
      const double grad_prev = trace.grad_norm[trace.grad_norm.size() - 2];
      if (grad_redo > cfg_.blowup_grad_factor * grad0 && grad_redo > grad_prev) {
        trace.outcome = Outcome::kBlowupDetected;
        std::ostringstream os;
        os << "gradient norm " << grad << " (refined " << grad_redo << ") exceeds "
           << cfg_.blowup_grad_factor << " x initial " << grad0;
        trace.note = os.str();
        break;
      }
    }
    if (decay_detected()) {
      trace.outcome = Outcome::kDecayDetected;
      trace.note = "L4 norm decaying over the trailing window with K_gamma above its floor";
      break;
    }
    checkpoint = u;
    checkpoint_t = t;
    checkpoint_dt = dt;
  }
  trace.final_time = t;
  return trace;
}

EvolutionTrace run(const RadialField& u0, const EvolutionConfig& cfg,
                   const EquationParams& params) {
  return Evolver(u0.grid, params, cfg).run(u0);
}

}  // namespace nlsrad
