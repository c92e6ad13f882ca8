#include "nlsrad/grid.hpp"

#include <cmath>
#include <sstream>

namespace nlsrad {

void validate(const EquationParams& params, bool allow_free_limit) {
  const bool gamma_ok = allow_free_limit ? (params.gamma >= 0.0)
                                         : (params.gamma > 0.0);
  if (!gamma_ok || !std::isfinite(params.gamma)) {
    fail(ErrorKind::kConfig,
         allow_free_limit ? "gamma must satisfy gamma >= 0"
                          : "gamma must satisfy gamma > 0");
  }
  if (!(params.mu > 0.0 && params.mu < 2.0)) {
    fail(ErrorKind::kConfig, "mu must satisfy 0 < mu < 2");
  }
  if (!(params.omega > 0.0) || !std::isfinite(params.omega)) {
    fail(ErrorKind::kConfig, "omega must satisfy omega > 0");
  }
}

RadialGrid::RadialGrid(std::size_t n, double r_max) : n_(n), r_max_(r_max) {
  if (n < 16) fail(ErrorKind::kConfig, "n too small (need n >= 16)");
  if (!(r_max > 1.0) || !std::isfinite(r_max)) {
    fail(ErrorKind::kConfig, "R_max must be finite and > 1");
  }
  h_ = r_max / static_cast<double>(n);
}

RadialGrid build_grid(std::size_t n, double r_max) {
  return RadialGrid(n, r_max);
}

RadialField::RadialField(const RadialGrid& g)
    : grid(g), values(g.n(), Complex{0.0, 0.0}) {}

RadialField::RadialField(const RadialGrid& g, std::vector<Complex> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.n()) {
    std::ostringstream os;
    os << "field has " << values.size() << " entries, grid has " << grid.n();
    fail(ErrorKind::kPrecondition, os.str());
  }
}

RadialField RadialField::from_function(
    const RadialGrid& g, const std::function<Complex(double)>& fn) {
  RadialField f(g);
  for (std::size_t j = 0; j < g.n(); ++j) f.values[j] = fn(g.node(j));
  return f;
}

void RadialField::check_finite() const {
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j].real()) || !std::isfinite(values[j].imag())) {
      std::ostringstream os;
      os << "non-finite field value at node " << j;
      fail(ErrorKind::kNumerical, os.str());
    }
  }
}

RadialField& RadialField::operator*=(Complex c) {
  for (auto& v : values) v *= c;
  return *this;
}

RadialField operator*(Complex c, RadialField f) {
  f *= c;
  return f;
}

RadialField operator*(double c, RadialField f) {
  f *= Complex{c, 0.0};
  return f;
}

double integrate(const RadialGrid& grid, std::span<const double> samples) {
  require(samples.size() == grid.n(), ErrorKind::kPrecondition,
          "sample count does not match grid");
  double acc = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    require(std::isfinite(samples[j]), ErrorKind::kNumerical,
            "non-finite integrand sample");
    const double r = grid.node(j);
    acc += samples[j] * r * r;
  }
  return 4.0 * kPi * grid.h() * acc;
}

double l2_norm_sq(const RadialField& u) {
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += u.grid.weight(j) * std::norm(u[j]);
  return acc;
}

double l4_norm_4(const RadialField& u) {
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double a = std::norm(u[j]);
    acc += u.grid.weight(j) * a * a;
  }
  return acc;
}

double gradient_norm_sq(const RadialField& u) {
  const auto& g = u.grid;
  const std::size_t n = g.n();
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double rf = g.face(j);
    acc += rf * rf * std::norm(u[j + 1] - u[j]);
  }
  acc /= g.h();
  // Outer face: half-cell difference to the Dirichlet value, half-cell width.
  const double big_r = g.r_max();
  acc += 2.0 * big_r * big_r * std::norm(u[n - 1]) / g.h();
  return 4.0 * kPi * acc;
}

double potential_integral(const RadialField& u, const EquationParams& params) {
  if (params.gamma == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    acc += u.grid.weight(j) * std::pow(u.grid.node(j), -params.mu) * std::norm(u[j]);
  }
  return params.gamma * acc;
}

LapGamma::LapGamma(const RadialGrid& grid, const EquationParams& params)
    : lower(grid.n(), 0.0), diag(grid.n(), 0.0), upper(grid.n(), 0.0) {
  const std::size_t n = grid.n();
  const double h2 = grid.h() * grid.h();
  for (std::size_t j = 0; j < n; ++j) {
    const double r = grid.node(j);
    const double scale = 1.0 / (r * r * h2);
    const double inner = j == 0 ? 0.0 : grid.face(j - 1) * grid.face(j - 1);
    lower[j] = inner * scale;
    double outer_diag;
    if (j + 1 < n) {
      upper[j] = grid.face(j) * grid.face(j) * scale;
      outer_diag = upper[j];
    } else {
      // Ghost value -u_{n-1} realizes u = 0 on the outer face.
      outer_diag = 2.0 * grid.r_max() * grid.r_max() * scale;
    }
    const double pot = params.gamma == 0.0 ? 0.0 : params.gamma * std::pow(r, -params.mu);
    diag[j] = -(lower[j] + outer_diag) - pot;
  }
}

namespace {

template <typename T>
void apply_impl(const LapGamma& op, std::span<const T> in, std::span<T> out) {
  const std::size_t n = op.diag.size();
  require(in.size() == n && out.size() == n, ErrorKind::kPrecondition,
          "operator size mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    T acc = op.diag[j] * in[j];
    if (j > 0) acc += op.lower[j] * in[j - 1];
    if (j + 1 < n) acc += op.upper[j] * in[j + 1];
    out[j] = acc;
  }
}

}  // namespace

void LapGamma::apply(std::span<const Complex> in, std::span<Complex> out) const {
  apply_impl<Complex>(*this, in, out);
}

void LapGamma::apply(std::span<const double> in, std::span<double> out) const {
  apply_impl<double>(*this, in, out);
}

RadialField apply_lap_gamma(const RadialField& u, const EquationParams& params) {
  u.check_finite();
  LapGamma op(u.grid, params);
  RadialField out(u.grid);
  op.apply(std::span<const Complex>(u.values), std::span<Complex>(out.values));
  return out;
}

template <typename T>
void solve_tridiagonal(std::span<const T> lower, std::span<const T> diag,
                       std::span<const T> upper, std::span<T> rhs) {
  const std::size_t n = diag.size();
  require(lower.size() == n && upper.size() == n && rhs.size() == n,
          ErrorKind::kPrecondition, "tridiagonal size mismatch");
  std::vector<T> c_prime(n);
  T denom = diag[0];
  require(std::abs(denom) > 0.0, ErrorKind::kInternal, "singular tridiagonal system");
  c_prime[0] = upper[0] / denom;
  rhs[0] = rhs[0] / denom;
  for (std::size_t j = 1; j < n; ++j) {
    denom = diag[j] - lower[j] * c_prime[j - 1];
    require(std::abs(denom) > 0.0, ErrorKind::kInternal, "singular tridiagonal system");
    c_prime[j] = upper[j] / denom;
    rhs[j] = (rhs[j] - lower[j] * rhs[j - 1]) / denom;
  }
  for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= c_prime[j] * rhs[j + 1];
}

template void solve_tridiagonal<double>(std::span<const double>, std::span<const double>,
                                        std::span<const double>, std::span<double>);
template void solve_tridiagonal<Complex>(std::span<const Complex>, std::span<const Complex>,
                                         std::span<const Complex>, std::span<Complex>);

CrankNicolson::CrankNicolson(const RadialGrid& grid, const EquationParams& params,
                             std::vector<double> absorb)
    : grid_(grid), op_(grid, params), absorb_(std::move(absorb)) {
  if (!absorb_.empty()) {
    require(absorb_.size() == grid.n(), ErrorKind::kPrecondition,
            "absorbing profile size does not match grid");
  }
}

const CrankNicolson::Factor& CrankNicolson::factor(double tau) const {
  if (auto it = cache_.find(tau); it != cache_.end()) return it->second;
  if (cache_.size() > 16) cache_.clear();

  const std::size_t n = grid_.n();
  const Complex half{0.0, 0.5 * tau};
  Factor f;
  f.c_prime.resize(n);
  f.inv_denom.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = absorb_.empty() ? 0.0 : absorb_[j];
    const Complex b = 1.0 - half * op_.diag[j] + 0.5 * tau * w;
    const Complex a = -half * op_.lower[j];
    const Complex c = -half * op_.upper[j];
    const Complex denom = j == 0 ? b : b - a * f.c_prime[j - 1];
    if (!(std::abs(denom) > 0.0)) fail(ErrorKind::kInternal, "singular Crank-Nicolson matrix");
    f.inv_denom[j] = 1.0 / denom;
    f.c_prime[j] = c * f.inv_denom[j];
  }
  return cache_.emplace(tau, std::move(f)).first->second;
}

void CrankNicolson::propagate(std::span<Complex> u, double tau) const {
  require(tau != 0.0 && std::isfinite(tau), ErrorKind::kPrecondition,
          "time step must be finite and non-zero");
  const std::size_t n = grid_.n();
  require(u.size() == n, ErrorKind::kPrecondition, "field size mismatch");
  const Complex half{0.0, 0.5 * tau};
  const Factor& f = factor(tau);

  std::vector<Complex>& rhs = work_;
  rhs.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex lu = op_.diag[j] * u[j];
    if (j > 0) lu += op_.lower[j] * u[j - 1];
    if (j + 1 < n) lu += op_.upper[j] * u[j + 1];
    const double w = absorb_.empty() ? 0.0 : absorb_[j];
    rhs[j] = u[j] + half * lu - 0.5 * tau * w * u[j];
  }
  // Forward sweep then back substitution.
  for (std::size_t j = 0; j < n; ++j) {
    const Complex a = -half * op_.lower[j];
    const Complex prev = j == 0 ? Complex{} : a * rhs[j - 1];
    rhs[j] = (rhs[j] - prev) * f.inv_denom[j];
  }
  for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= f.c_prime[j] * rhs[j + 1];
  for (std::size_t j = 0; j < n; ++j) u[j] = rhs[j];
}

RadialField solve_cn(const RadialField& u_rhs, double tau, const EquationParams& params) {
  u_rhs.check_finite();
  CrankNicolson cn(u_rhs.grid, params);
  RadialField v = u_rhs;
  cn.propagate(std::span<Complex>(v.values), tau);
  return v;
}

}  // namespace nlsrad
