#include "nlsrad/virial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlsrad {

namespace {

// Bridge coefficients, lowest degree first. The polynomial matches s^2 up to
// the fourth derivative at s = 1 and has vanishing first three derivatives at
// s = 3.
constexpr std::array<double, 8> kBridge = {
    43.0 / 28.0, -135.0 / 16.0, 81.0 / 4.0, -375.0 / 16.0,
    65.0 / 4.0,  -101.0 / 16.0, 5.0 / 4.0,  -11.0 / 112.0};

struct BridgeBounds {
  double max_x1 = 0.0;
  double min_x2 = 0.0;
  double max_x2 = 0.0;
  double sup_x3 = 0.0;
  double sup_x4 = 0.0;
  double sup_quartic = 0.0;  // |X'' + 2X'/s - 6|
  double sup_radial = 0.0;   // |X'/s - 2|
};

BridgeBounds sample_bounds() {
  BridgeBounds b;
  b.min_x2 = 2.0;
  constexpr int kSamples = 20000;
  for (int i = 0; i <= kSamples; ++i) {
    const double s = 3.0 * i / kSamples;
    const auto d = cutoff_profile(s);
    b.max_x1 = std::max(b.max_x1, d[1]);
    b.min_x2 = std::min(b.min_x2, d[2]);
    b.max_x2 = std::max(b.max_x2, d[2]);
    b.sup_x3 = std::max(b.sup_x3, std::abs(d[3]));
    b.sup_x4 = std::max(b.sup_x4, std::abs(d[4]));
    if (s > 0.0) {
      b.sup_quartic = std::max(b.sup_quartic, std::abs(d[2] + 2.0 * d[1] / s - 6.0));
      b.sup_radial = std::max(b.sup_radial, std::abs(d[1] / s - 2.0));
    }
  }
  // The fourth derivative jumps to 0 at s = 3; include the left limit.
  b.sup_x4 = std::max(b.sup_x4, std::abs(cutoff_profile(3.0 - 1e-12)[4]));
  return b;
}

const BridgeBounds& bounds() {
  static const BridgeBounds b = sample_bounds();
  return b;
}

// Radial derivative at face j with the face radius and quadrature weight. The
// outer face uses the Dirichlet half cell.
struct FaceSample {
  Complex du;
  double r;
  double weight;
};

FaceSample face_sample(const RadialField& u, std::size_t j) {
  const auto& g = u.grid;
  const std::size_t n = g.n();
  if (j + 1 < n) {
    const double r = g.face(j);
    return {(u[j + 1] - u[j]) / g.h(), r, 4.0 * kPi * r * r * g.h()};
  }
  const double r = g.r_max();
  return {-u[n - 1] / (0.5 * g.h()), r, 4.0 * kPi * r * r * 0.5 * g.h()};
}

// tail_integral for every radius of an increasing ladder in one sweep.
std::vector<double> ladder_tails(const RadialField& u, const std::vector<double>& radii,
                                 const EquationParams& params) {
  const auto& g = u.grid;
  const std::size_t n = g.n();
  // Suffix sums from the outer edge inwards.
  std::vector<double> grad(n + 1, 0.0), quartic(n + 1, 0.0), mass(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) {
    const auto fs = face_sample(u, j);
    const double a = std::norm(u[j]);
    grad[j] = grad[j + 1] + fs.weight * std::norm(fs.du);
    quartic[j] = quartic[j + 1] + g.weight(j) * a * a;
    mass[j] = mass[j + 1] + g.weight(j) * a;
  }
  std::vector<double> out(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double R = radii[k];
    // First face with radius >= R and first node with radius >= R.
    const auto jf = static_cast<std::size_t>(std::max(0.0, std::ceil(R / g.h() - 1.0)));
    const auto jn = static_cast<std::size_t>(std::max(0.0, std::ceil(R / g.h() - 0.5)));
    const double gsum = grad[std::min(jf, n - 1)];
    out[k] = gsum + quartic[std::min(jn, n)] + std::pow(R, -params.mu) * mass[std::min(jn, n)];
  }
  return out;
}

}  // namespace

std::array<double, 5> cutoff_profile(double s) {
  if (s <= 1.0) return {s * s, 2.0 * s, 2.0, 0.0, 0.0};
  if (s >= 3.0) return {kCutoffPlateau, 0.0, 0.0, 0.0, 0.0};
  std::array<double, 5> d{};
  for (int k = 0; k < 5; ++k) {
    // Horner on the k-th derivative.
    double acc = 0.0;
    for (int m = 7; m >= k; --m) {
      double c = kBridge[m];
      for (int q = 0; q < k; ++q) c *= static_cast<double>(m - q);
      acc = acc * s + c;
    }
    d[k] = acc;
  }
  return d;
}

VirialCutoff build_cutoff(double R, const RadialGrid& grid) {
  if (!(R > 0.0) || !std::isfinite(R)) fail(ErrorKind::kConfig, "cutoff radius must be positive");
  if (!(3.0 * R < grid.r_max())) {
    fail(ErrorKind::kConfig, "cutoff radius needs 3R < R_max");
  }
  if (bounds().max_x2 > 2.0 + 1e-12) {
    fail(ErrorKind::kInternal, "cutoff bridge violates X'' <= 2");
  }
  const std::size_t n = grid.n();
  VirialCutoff cut;
  cut.R = R;
  cut.w.resize(n);
  cut.w1.resize(n);
  cut.w2.resize(n);
  cut.w3.resize(n);
  cut.w4.resize(n);
  cut.w1_face.resize(n);
  cut.w2_face.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto d = cutoff_profile(grid.node(j) / R);
    cut.w[j] = R * R * d[0];
    cut.w1[j] = R * d[1];
    cut.w2[j] = d[2];
    cut.w3[j] = d[3] / R;
    cut.w4[j] = d[4] / (R * R);
    const double rf = j + 1 < n ? grid.face(j) : grid.r_max();
    const auto df = cutoff_profile(rf / R);
    cut.w1_face[j] = R * df[1];
    cut.w2_face[j] = df[2];
  }
  return cut;
}

double remainder_constant(const EquationParams& params) {
  const auto& b = bounds();
  const double c_grad = 4.0 * (2.0 - b.min_x2);
  const double c_quartic = b.sup_quartic;
  const double c_mass = b.sup_x4 + 4.0 * b.sup_x3 + 2.0 * params.mu * params.gamma * b.sup_radial;
  return std::max({c_grad, c_quartic, c_mass});
}

double tail_integral(const RadialField& u, double R, const EquationParams& params) {
  const auto& g = u.grid;
  const double weight_r = std::pow(R, -params.mu);
  double acc = 0.0;
  for (std::size_t j = 0; j < g.n(); ++j) {
    const auto fs = face_sample(u, j);
    if (fs.r >= R) acc += fs.weight * std::norm(fs.du);
    if (g.node(j) >= R) {
      const double a = std::norm(u[j]);
      acc += g.weight(j) * (a * a + weight_r * a);
    }
  }
  return acc;
}

double i_value(const RadialField& u, const VirialCutoff& cut) {
  require(cut.w.size() == u.size(), ErrorKind::kPrecondition, "cutoff sampled on another grid");
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += u.grid.weight(j) * cut.w[j] * std::norm(u[j]);
  return acc;
}

double i_prime(const RadialField& u, const VirialCutoff& cut) {
  require(cut.w.size() == u.size(), ErrorKind::kPrecondition, "cutoff sampled on another grid");
  const auto& g = u.grid;
  double acc = 0.0;
  // Face value of conj(u) u_r; the outer face carries u = 0.
  for (std::size_t j = 0; j + 1 < g.n(); ++j) {
    const double r = g.face(j);
    const Complex ubar = std::conj(0.5 * (u[j] + u[j + 1]));
    const Complex ur = (u[j + 1] - u[j]) / g.h();
    acc += 4.0 * kPi * r * r * g.h() * cut.w1_face[j] * (ubar * ur).imag();
  }
  return 2.0 * acc;
}

VirialTerms i_double_prime(const RadialField& u, const VirialCutoff& cut,
                           const EquationParams& params) {
  require(cut.w.size() == u.size(), ErrorKind::kPrecondition, "cutoff sampled on another grid");
  const auto& g = u.grid;
  VirialTerms t;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
  for (std::size_t j = 0; j < g.n(); ++j) {
    const auto fs = face_sample(u, j);
    const double gr2 = std::norm(fs.du);
    const double wf1 = cut.w1_face[j];
    const double wf2 = cut.w2_face[j];
    // |x . grad u|^2 = r^2 |u_r|^2.
    t.f1 += fs.weight * 4.0 * (wf2 / (fs.r * fs.r) - wf1 / (fs.r * fs.r * fs.r)) * fs.r * fs.r * gr2;
    t.grad += fs.weight * 4.0 * (wf1 / fs.r) * gr2;
    r1 += fs.weight * 4.0 * (wf2 - 2.0) * gr2;

    const double r = g.node(j);
    const double wt = g.weight(j);
    const double a = std::norm(u[j]);
    const double f2 = cut.w4[j] + 4.0 / r * cut.w3[j];
    const double f3 = cut.w2[j] + 2.0 / r * cut.w1[j];
    t.f2 += wt * f2 * a;
    t.f3 += wt * f3 * a * a;
    r2 -= wt * (f3 - 6.0) * a * a;
    r3 -= wt * f2 * a;
    if (params.gamma != 0.0) {
      const double v = params.gamma * std::pow(r, -params.mu);
      t.pot += wt * 2.0 * params.mu * cut.w1[j] * v / r * a;
      r4 += wt * 2.0 * params.mu * (cut.w1[j] / r - 2.0) * v * a;
    }
  }
  t.formula = t.f1 + t.grad - t.f2 - t.f3 + t.pot;
  t.k_gamma = virial(u, params);
  t.r1 = r1;
  t.r2 = r2;
  t.r3 = r3;
  t.r4 = r4;
  t.decomposition = 4.0 * t.k_gamma + r1 + r2 + r3 + r4;
  return t;
}

RigidityReport rigidity_probe(const RadialField& u0, const EquationParams& params,
                              double level, const EvolutionConfig& cfg) {
  u0.check_finite();
  const auto rep0 = report(u0, params);
  require(rep0.action < level, ErrorKind::kPrecondition,
          "datum must lie below the threshold (S(u0) < level)");
  require(k_alpha_beta(rep0, kVirialPair, params) > 0.0, ErrorKind::kPrecondition,
          "datum must have K_gamma(u0) > 0");

  RigidityReport out;
  out.delta0 = level - rep0.action;
  out.remainder_constant = remainder_constant(params);
  const double r_max = u0.grid.r_max();
  std::vector<double> ladder;
  for (double R = 1.05; 3.0 * R < r_max; R *= 1.05) ladder.push_back(R);

  EvolutionConfig run_cfg = cfg;
  run_cfg.absorb = false;
  run_cfg.decay_window = std::max(cfg.decay_window, 2.0 * cfg.t_end);
  const Evolver evolver(u0.grid, params, run_cfg);

  // First pass: largest tail over the monitored times for every ladder radius.
  std::vector<double> worst_tail(ladder.size(), 0.0);
  evolver.run(u0, [&](double, const RadialField& u) {
    const auto tails = ladder_tails(u, ladder, params);
    for (std::size_t k = 0; k < ladder.size(); ++k) {
      worst_tail[k] = std::max(worst_tail[k], tails[k]);
    }
  });
  const double budget = 0.5 * out.delta0;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const double tail = tail_integral(u0, ladder[k], params);
    if (out.r_initial == 0.0 && out.remainder_constant * tail < budget) out.r_initial = ladder[k];
    if (out.R == 0.0 && out.remainder_constant * worst_tail[k] < budget) {
      out.R = ladder[k];
      out.tail0 = tail;
      out.tail_max = worst_tail[k];
    }
  }
  if (out.R == 0.0) {
    std::ostringstream os;
    os << "tail criterion unsatisfiable for 3R < R_max = " << r_max << "; use a larger R_max";
    fail(ErrorKind::kConfig, os.str());
  }

  const VirialCutoff cut = build_cutoff(out.R, u0.grid);
  const double max_x1 = bounds().max_x1;
  out.min_ipp = INFINITY;
  out.iprime_bound_ok = true;
  auto hook = [&](double t, const RadialField& u) {
    ProbeTick tick;
    tick.t = t;
    tick.i = i_value(u, cut);
    tick.i_prime = i_prime(u, cut);
    tick.i_prime_bound =
        2.0 * out.R * max_x1 * std::sqrt(l2_norm_sq(u) * gradient_norm_sq(u));
    tick.terms = i_double_prime(u, cut, params);
    out.min_ipp = std::min(out.min_ipp, tick.terms.formula);
    out.iprime_max = std::max(out.iprime_max, std::abs(tick.i_prime));
    if (std::abs(tick.i_prime) > tick.i_prime_bound) out.iprime_bound_ok = false;
    out.ticks.push_back(tick);
  };
  const auto trace = evolver.run(u0, hook);
  out.outcome = trace.outcome;
  out.bound_ok = out.min_ipp >= 0.5 * out.delta0;
  return out;
}

}  // namespace nlsrad
