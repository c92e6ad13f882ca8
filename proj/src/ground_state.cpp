#include "nlsrad/ground_state.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace nlsrad {

const std::vector<ScalingPair>& residual_pairs() {
  static const std::vector<ScalingPair> pairs{{1.0, 0.0}, {3.0, 2.0}, {2.0, 1.0}, {3.0, 0.0}};
  return pairs;
}

double stationary_residual(const RadialField& q, const EquationParams& params) {
  const auto lq = apply_lap_gamma(q, params);
  double acc = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const Complex res = -params.omega * q[j] + lq[j] + std::norm(q[j]) * q[j];
    acc += q.grid.weight(j) * std::norm(res);
  }
  return std::sqrt(acc);
}

std::map<ScalingPair, double> validate_pohozaev(const GroundStateResult& result,
                                                const EquationParams& params,
                                                const std::vector<ScalingPair>& pairs) {
  const auto rep = report(result.profile, params);
  std::map<ScalingPair, double> out;
  for (const auto& pair : pairs) out[pair] = k_alpha_beta(rep, pair, params);
  return out;
}

namespace {

// Symmetric tridiagonal matrix of the quadratic form
// f -> omega ||f||^2 + ||d_r f||^2 + int gamma r^{-mu} f^2 in node coordinates.
struct QuadraticForm {
  std::vector<double> lower, diag, upper;
  std::vector<double> weight;

  QuadraticForm(const RadialGrid& grid, const EquationParams& params) {
    const LapGamma op(grid, params);
    const std::size_t n = grid.n();
    lower.resize(n);
    diag.resize(n);
    upper.resize(n);
    weight.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      weight[j] = grid.weight(j);
      diag[j] = weight[j] * (params.omega - op.diag[j]);
      lower[j] = -weight[j] * op.lower[j];
      upper[j] = -weight[j] * op.upper[j];
    }
  }

  double value(const std::vector<double>& f) const {
    const std::size_t n = f.size();
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double af = diag[j] * f[j];
      if (j > 0) af += lower[j] * f[j - 1];
      if (j + 1 < n) af += upper[j] * f[j + 1];
      acc += f[j] * af;
    }
    return acc;
  }

  double quartic(const std::vector<double>& f) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) acc += weight[j] * f[j] * f[j] * f[j] * f[j];
    return acc;
  }

  // Solves A x = rhs in place.
  void solve(std::vector<double>& rhs) const {
    solve_tridiagonal<double>(lower, diag, upper, rhs);
  }
};

RadialField to_field(const RadialGrid& grid, const std::vector<double>& f) {
  RadialField out(grid);
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j];
  return out;
}

void finalize(GroundStateResult& res, const EquationParams& params) {
  res.ode_residual = stationary_residual(res.profile, params);
  if (res.k_residuals.empty()) {
    res.k_residuals = validate_pohozaev(res, params, residual_pairs());
  }
}

// Newton iterations on -omega q + Delta_gamma q + q^3 = 0 started from the
// descent result. The quotient is flat to round-off long before the profile
// is converged to round-off; the Euler-Lagrange residual is not. The
// Jacobian is tridiagonal; an iterate that does not reduce the residual is
// discarded.
void newton_polish(std::vector<double>& f, const RadialGrid& grid, const EquationParams& params) {
  const LapGamma op(grid, params);
  const std::size_t n = f.size();
  auto residual = [&](const std::vector<double>& q, std::vector<double>& out) {
    op.apply(std::span<const double>(q), std::span<double>(out));
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      out[j] += -params.omega * q[j] + q[j] * q[j] * q[j];
      acc += grid.weight(j) * out[j] * out[j];
    }
    return std::sqrt(acc);
  };
  std::vector<double> res(n), lower(op.lower), upper(op.upper), diag(n), trial(n), trial_res(n);
  double norm = residual(f, res);
  for (int it = 0; it < 20; ++it) {
    for (std::size_t j = 0; j < n; ++j) {
      diag[j] = op.diag[j] - params.omega + 3.0 * f[j] * f[j];
      res[j] = -res[j];
    }
    try {
      solve_tridiagonal<double>(lower, diag, upper, res);
    } catch (const Error&) {
      return;
    }
    for (std::size_t j = 0; j < n; ++j) trial[j] = f[j] + res[j];
    const double trial_norm = residual(trial, trial_res);
    if (!(trial_norm < norm)) return;
    f.swap(trial);
    res.swap(trial_res);
    norm = trial_norm;
  }
}

}  // namespace

GroundStateResult minimize_quotient(const EquationParams& params, const RadialGrid& grid,
                                    const GroundStateOptions& opts) {
  validate(params, opts.allow_free_limit);
  const QuadraticForm form(grid, params);
  const std::size_t n = grid.n();

  auto quotient = [&](const std::vector<double>& f, double& h1, double& q4) {
    h1 = form.value(f);
    q4 = form.quartic(f);
    return h1 * h1 / (4.0 * q4);
  };
  auto project = [&](std::vector<double>& f) {
    double h1 = 0.0;
    double q4 = 0.0;
    quotient(f, h1, q4);
    if (!(q4 > 0.0) || !(h1 > 0.0) || !std::isfinite(h1) || !std::isfinite(q4)) {
      fail(ErrorKind::kNumerical,
           "descent collapsed to the zero field; reduce the step size or refine the grid");
    }
    const double lambda = std::sqrt(h1 / q4);
    for (auto& v : f) v = lambda * std::abs(v);
  };

  std::vector<double> f(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = grid.node(j);
    f[j] = std::exp(-r * r);
  }
  project(f);

  double h1 = 0.0;
  double q4 = 0.0;
  double j_cur = quotient(f, h1, q4);
  double step = 0.5;
  int stalls = 0;
  int iter = 0;
  bool converged = false;
  std::vector<double> grad(n), trial(n), cubic(n);

  for (; iter < opts.max_iter; ++iter) {
    // Gradient of the quotient in the metric of the quadratic form, evaluated
    // on the Nehari set where h1 == q4.
    for (std::size_t j = 0; j < n; ++j) cubic[j] = form.weight[j] * f[j] * f[j] * f[j];
    form.solve(cubic);
    const double ratio = h1 / q4;
    for (std::size_t j = 0; j < n; ++j) grad[j] = ratio * f[j] - ratio * ratio * cubic[j];
    const double g_norm_sq = form.value(grad);
    if (std::sqrt(g_norm_sq / h1) < opts.tol_grad) {
      converged = true;
      break;
    }
    // dJ along -grad is -<grad, grad>_A; Armijo test on the relative decrease.
    const double slope = g_norm_sq / j_cur;
    step = std::min(1.0, 2.0 * step);
    double j_trial = 0.0;
    double h1_t = 0.0;
    double q4_t = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = f[j] - step * grad[j];
      j_trial = quotient(trial, h1_t, q4_t);
      if (std::isfinite(j_trial) && q4_t > 0.0 &&
          j_trial <= j_cur * (1.0 - 1e-4 * step * slope)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No descent available at round-off level: treat as converged.
      converged = true;
      break;
    }
    f.swap(trial);
    project(f);
    const double j_new = quotient(f, h1, q4);
    const double rel = (j_cur - j_new) / j_cur;
    j_cur = j_new;
    stalls = rel < opts.tol_decrease ? stalls + 1 : 0;
    if (stalls >= 3) {
      converged = true;
      break;
    }
  }

  if (opts.newton_polish) newton_polish(f, grid, params);

  GroundStateResult res(grid);
  res.profile = to_field(grid, f);
  res.iterations = iter;
  res.converged = converged;
  res.level = quotient(f, h1, q4);
  res.functionals = report(res.profile, params);
  finalize(res, params);
  return res;
}

namespace {

enum class ShotOutcome { kTooSmall, kTooLarge, kUndecided };

// Q, Q', and running integrals of mass, kinetic, potential and quartic
// densities (4 pi r^2 weights included).
using State = std::array<double, 6>;

struct RadialOde {
  EquationParams params;

  State operator()(double r, const State& y) const {
    const double q = y[0];
    const double p = y[1];
    const double pot = params.gamma == 0.0 ? 0.0 : params.gamma * std::pow(r, -params.mu);
    const double r2 = 4.0 * kPi * r * r;
    State d{};
    d[0] = p;
    d[1] = -2.0 * p / r + params.omega * q + pot * q - q * q * q;
    d[2] = r2 * q * q;
    d[3] = r2 * p * p;
    d[4] = r2 * pot * q * q;
    d[5] = r2 * q * q * q * q;
    return d;
  }
};

State rk4(const RadialOde& ode, double r, const State& y, double h) {
  auto axpy = [](const State& a, const State& b, double s) {
    State out;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
    return out;
  };
  const State k1 = ode(r, y);
  const State k2 = ode(r + 0.5 * h, axpy(y, k1, 0.5 * h));
  const State k3 = ode(r + 0.5 * h, axpy(y, k2, 0.5 * h));
  const State k4 = ode(r + h, axpy(y, k3, h));
  State out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

// Local expansion near the origin: the r^{2-mu} term balances the singular
// potential, the r^2 term the regular part.
State initial_state(const EquationParams& p, double a, double r0) {
  const double mu = p.mu;
  const double c1 = p.gamma * a / ((2.0 - mu) * (3.0 - mu));
  const double c2 = (p.omega * a - a * a * a) / 6.0;
  State y{};
  y[0] = a + c1 * std::pow(r0, 2.0 - mu) + c2 * r0 * r0;
  y[1] = (2.0 - mu) * c1 * std::pow(r0, 1.0 - mu) + 2.0 * c2 * r0;
  const double r03 = r0 * r0 * r0;
  y[2] = 4.0 * kPi * a * a * r03 / 3.0;
  y[3] = 4.0 * kPi * (2.0 - mu) * (2.0 - mu) * c1 * c1 * std::pow(r0, 5.0 - 2.0 * mu) /
         (5.0 - 2.0 * mu);
  y[4] = 4.0 * kPi * p.gamma * a * a * std::pow(r0, 3.0 - mu) / (3.0 - mu);
  y[5] = 4.0 * kPi * a * a * a * a * r03 / 3.0;
  return y;
}

struct Shot {
  ShotOutcome outcome = ShotOutcome::kUndecided;
  std::vector<double> nodes;  // Q at grid nodes until the stop point
  State at_stop{};            // integrals up to the positive minimum
  double r_stop = 0.0;
};

Shot shoot(const EquationParams& params, const RadialGrid& grid, double a, int substeps,
           bool record) {
  const RadialOde ode{params};
  const double hs = grid.h() / substeps;
  double r = grid.node(0);
  State y = initial_state(params, a, r);
  Shot shot;
  if (record) shot.nodes.push_back(y[0]);
  bool turned = false;
  State best = y;
  double best_r = r;
  const double cap = 10.0 * std::abs(a) + 10.0;

  for (std::size_t j = 1; j < grid.n(); ++j) {
    for (int s = 0; s < substeps; ++s) {
      y = rk4(ode, r, y, hs);
      r = grid.node(j - 1) + (s + 1) * hs;
    }
    r = grid.node(j);
    if (!std::isfinite(y[0]) || y[0] < 0.0) {
      shot.outcome = ShotOutcome::kTooLarge;
      break;
    }
    if (y[1] < 0.0) turned = true;
    if ((turned && y[1] > 0.0) || y[0] > cap) {
      shot.outcome = ShotOutcome::kTooSmall;
      break;
    }
    if (record) shot.nodes.push_back(y[0]);
    best = y;
    best_r = r;
  }
  shot.at_stop = best;
  shot.r_stop = best_r;
  return shot;
}

}  // namespace

GroundStateResult shoot_ode(const EquationParams& params, const RadialGrid& grid,
                            std::pair<double, double> a0_bracket, bool allow_free_limit,
                            int substeps) {
  validate(params, allow_free_limit);
  require(substeps >= 1, ErrorKind::kPrecondition, "substeps must be >= 1");
  double lo = std::min(a0_bracket.first, a0_bracket.second);
  double hi = std::max(a0_bracket.first, a0_bracket.second);
  require(lo > 0.0, ErrorKind::kPrecondition, "shooting bracket must be positive");

  const auto out_lo = shoot(params, grid, lo, substeps, false).outcome;
  const auto out_hi = shoot(params, grid, hi, substeps, false).outcome;
  if (out_lo != ShotOutcome::kTooSmall || out_hi != ShotOutcome::kTooLarge) {
    std::ostringstream os;
    os << "no sign change of the shooting functional in [" << lo << ", " << hi << "]";
    fail(ErrorKind::kPrecondition, os.str());
  }
  int iter = 0;
  while (iter < 200 && hi - lo > 4e-16 * hi) {
    const double mid = 0.5 * (lo + hi);
    const auto out = shoot(params, grid, mid, substeps, false).outcome;
    ++iter;
    if (out == ShotOutcome::kTooSmall) {
      lo = mid;
    } else if (out == ShotOutcome::kTooLarge) {
      hi = mid;
    } else {
      lo = hi = mid;
    }
  }

  // The undershooting branch stays positive; cut it at its positive minimum
  // and continue with an exponential tail.
  const Shot shot = shoot(params, grid, lo, substeps, true);
  std::vector<double> q(grid.n(), 0.0);
  std::size_t k = 0;
  for (; k < shot.nodes.size() && k < grid.n(); ++k) q[k] = shot.nodes[k];
  if (k > 0) {
    const double rs = grid.node(k - 1);
    const double qs = q[k - 1];
    const double decay = std::sqrt(params.omega);
    for (std::size_t j = k; j < grid.n(); ++j) {
      const double r = grid.node(j);
      q[j] = qs * (rs / r) * std::exp(-decay * (r - rs));
    }
  }

  GroundStateResult res(grid);
  res.profile = to_field(grid, q);
  res.iterations = iter;
  res.converged = true;
  res.central_amplitude = lo;

  FunctionalReport rep;
  rep.mass = shot.at_stop[2];
  rep.kinetic = shot.at_stop[3];
  rep.potential_term = shot.at_stop[4];
  rep.quartic = shot.at_stop[5];
  rep.energy = 0.5 * rep.kinetic + 0.5 * rep.potential_term - 0.25 * rep.quartic;
  rep.action = 0.5 * params.omega * rep.mass + rep.energy;
  rep.sobolev_gamma_sq = rep.kinetic + rep.potential_term;
  rep.h1_omega_gamma_sq = params.omega * rep.mass + rep.sobolev_gamma_sq;
  res.functionals = rep;
  res.level = rep.action;
  for (const auto& pair : residual_pairs()) res.k_residuals[pair] = k_alpha_beta(rep, pair, params);
  finalize(res, params);
  return res;
}

}  // namespace nlsrad
