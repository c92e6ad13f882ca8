#include "nlsrad/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlsrad {

bool admissible(const ScalingPair& pair) noexcept {
  return pair.alpha > 0.0 && pair.beta >= 0.0 &&
         2.0 * pair.alpha - 3.0 * pair.beta >= 0.0;
}

void validate(const ScalingPair& pair) {
  if (!admissible(pair)) {
    std::ostringstream os;
    os << "scaling pair (" << pair.alpha << ", " << pair.beta
       << ") violates alpha > 0, beta >= 0, 2 alpha - 3 beta >= 0";
    fail(ErrorKind::kPrecondition, os.str());
  }
}

const std::vector<ScalingPair>& default_pairs() {
  static const std::vector<ScalingPair> pairs{
      {1.0, 0.0}, {3.0, 2.0}, {2.0, 1.0}, {3.0, 0.0}, {3.0, 1.0}};
  return pairs;
}

FunctionalReport report(const RadialField& f, const EquationParams& params) {
  f.check_finite();
  FunctionalReport r;
  r.mass = l2_norm_sq(f);
  r.kinetic = gradient_norm_sq(f);
  r.potential_term = potential_integral(f, params);
  r.quartic = l4_norm_4(f);
  r.energy = 0.5 * r.kinetic + 0.5 * r.potential_term - 0.25 * r.quartic;
  r.action = 0.5 * params.omega * r.mass + r.energy;
  r.sobolev_gamma_sq = r.kinetic + r.potential_term;
  r.h1_omega_gamma_sq = params.omega * r.mass + r.sobolev_gamma_sq;
  return r;
}

double k_alpha_beta(const FunctionalReport& rep, const ScalingPair& pair,
                    const EquationParams& params) {
  validate(pair);
  const double a = pair.alpha;
  const double b = pair.beta;
  // Scaling exponents: mass 2a-3b, gradient 2a-b, potential 2a-(3-mu)b,
  // quartic 4a-3b.
  return (2.0 * a - 3.0 * b) * 0.5 * params.omega * rep.mass +
         (2.0 * a - b) * 0.5 * rep.kinetic +
         (2.0 * a - (3.0 - params.mu) * b) * 0.5 * rep.potential_term -
         (4.0 * a - 3.0 * b) * 0.25 * rep.quartic;
}

double k_alpha_beta(const RadialField& f, const ScalingPair& pair,
                    const EquationParams& params) {
  validate(pair);
  return k_alpha_beta(report(f, params), pair, params);
}

double nehari(const RadialField& f, const EquationParams& params) {
  return k_alpha_beta(f, kNehariPair, params);
}

double virial(const RadialField& f, const EquationParams& params) {
  return k_alpha_beta(f, kVirialPair, params);
}

double t_alpha_beta(const RadialField& f, const ScalingPair& pair,
                    const EquationParams& params) {
  validate(pair);
  const auto rep = report(f, params);
  return rep.action - k_alpha_beta(rep, pair, params) / (2.0 * pair.alpha - pair.beta);
}

double nehari_scaling(const FunctionalReport& rep) {
  require(rep.quartic > 0.0, ErrorKind::kPrecondition,
          "Nehari scaling needs a non-zero field");
  return std::sqrt(rep.h1_omega_gamma_sq / rep.quartic);
}

namespace {

// Piecewise cubic Hermite interpolant with Fritsch-Carlson limited slopes.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)), d_(x_.size(), 0.0) {
    const std::size_t m = x_.size();
    std::vector<double> h(m - 1), delta(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k) {
      h[k] = x_[k + 1] - x_[k];
      delta[k] = (y_[k + 1] - y_[k]) / h[k];
    }
    for (std::size_t k = 1; k + 1 < m; ++k) {
      if (delta[k - 1] * delta[k] <= 0.0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d_[m - 1] = end_slope(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
  }

  double operator()(double s) const {
    if (s <= x_.front()) return y_.front();
    if (s >= x_.back()) return 0.0;
    const auto it = std::upper_bound(x_.begin(), x_.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[k + 1] - x_[k];
    const double t = (s - x_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * d_[k] +
           (-2 * t3 + 3 * t2) * y_[k + 1] + (t3 - t2) * h * d_[k + 1];
  }

 private:
  static double end_slope(double h0, double h1, double m0, double m1) {
    double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (d * m0 <= 0.0) return 0.0;
    if (m0 * m1 <= 0.0 && std::abs(d) > 3.0 * std::abs(m0)) return 3.0 * m0;
    return d;
  }

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

}  // namespace

RadialField rescale(const RadialField& f, double log_amplitude, double log_dilation) {
  f.check_finite();
  const auto& g = f.grid;
  const std::size_t n = g.n();
  const double dilation = std::exp(log_dilation);
  const double amplitude = std::exp(log_amplitude);

  // Stretching (dilation < 1) pulls values from [dilation * R_max, R_max]
  // beyond the domain; they must be negligible.
  if (dilation < 1.0) {
    double peak = 0.0;
    double tail = 0.0;
    const double cut = dilation * g.r_max();
    for (std::size_t j = 0; j < n; ++j) {
      peak = std::max(peak, std::abs(f[j]));
      if (g.node(j) >= cut) tail = std::max(tail, std::abs(f[j]));
    }
    if (tail > 1e-10 * peak) {
      fail(ErrorKind::kPrecondition,
           "rescaled field support exceeds R_max; use a larger domain");
    }
  }

  std::vector<double> x;
  x.reserve(n + 2);
  x.push_back(-g.node(0));
  for (std::size_t j = 0; j < n; ++j) x.push_back(g.node(j));
  x.push_back(g.r_max());

  auto part = [&](auto getter) {
    std::vector<double> y;
    y.reserve(n + 2);
    y.push_back(getter(f[0]));
    for (std::size_t j = 0; j < n; ++j) y.push_back(getter(f[j]));
    y.push_back(0.0);
    return MonotoneCubic(x, std::move(y));
  };
  const auto re = part([](Complex c) { return c.real(); });
  const auto im = part([](Complex c) { return c.imag(); });

  RadialField out(g);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = dilation * g.node(j);
    out[j] = amplitude * Complex{re(s), im(s)};
  }
  return out;
}

FdCheck fd_check_k(const RadialField& f, const ScalingPair& pair,
                   const EquationParams& params, double eps) {
  validate(pair);
  require(eps > 0.0 && eps <= 1e-2, ErrorKind::kPrecondition,
          "eps must lie in (0, 1e-2]");
  FdCheck out;
  out.analytic = k_alpha_beta(f, pair, params);
  const auto plus = rescale(f, pair.alpha * eps, pair.beta * eps);
  const auto minus = rescale(f, -pair.alpha * eps, -pair.beta * eps);
  out.finite_difference =
      (report(plus, params).action - report(minus, params).action) / (2.0 * eps);
  return out;
}

double radial_sobolev_ratio(const RadialField& f, double radius) {
  const auto& g = f.grid;
  require(radius > 0.0 && radius < g.r_max(), ErrorKind::kPrecondition,
          "radius must lie in (0, R_max)");
  f.check_finite();
  const std::size_t n = g.n();
  double mass = 0.0;
  double quartic = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (g.node(j) < radius) continue;
    const double a = std::norm(f[j]);
    mass += g.weight(j) * a;
    quartic += g.weight(j) * a * a;
  }
  double grad = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double rf = g.face(j);
    if (rf < radius) continue;
    grad += 4.0 * kPi * rf * rf * std::norm(f[j + 1] - f[j]) / g.h();
  }
  grad += 8.0 * kPi * g.r_max() * g.r_max() * std::norm(f[n - 1]) / g.h();

  const double denom = std::pow(mass, 1.5) * std::sqrt(grad) / (radius * radius);
  if (!(denom > 0.0)) fail(ErrorKind::kPrecondition, "field vanishes outside R");
  return quartic / denom;
}

}  // namespace nlsrad
