#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "nlsrad/error.hpp"

namespace nlsrad {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Parameters of the radial cubic NLS in three dimensions with the repulsive
// potential gamma/|x|^mu. Dimension and nonlinearity power are fixed.
struct EquationParams {
  static constexpr int kDim = 3;
  static constexpr int kPower = 3;

  double gamma = 1.0;
  double mu = 1.0;
  double omega = 1.0;
};

// Throws kConfig unless gamma > 0, 0 < mu < 2 and omega > 0. With
// allow_free_limit the potential may vanish (gamma == 0), which is the
// reference problem used for the mass-energy thresholds.
void validate(const EquationParams& params, bool allow_free_limit = false);

// Uniform cell-centred grid on [0, r_max]. Nodes sit at r_j = (j + 1/2) h so
// the singular potential is never evaluated at the origin; cell faces sit at
// multiples of h.
class RadialGrid {
 public:
  RadialGrid(std::size_t n, double r_max);

  std::size_t n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  double r_max() const noexcept { return r_max_; }

  double node(std::size_t j) const noexcept {
    return (static_cast<double>(j) + 0.5) * h_;
  }
  // Radius of the face between cell j and cell j + 1 (the outer face of j).
  double face(std::size_t j) const noexcept {
    return static_cast<double>(j + 1) * h_;
  }
  // Midpoint quadrature weight 4 pi r_j^2 h.
  double weight(std::size_t j) const noexcept {
    const double r = node(j);
    return 4.0 * kPi * r * r * h_;
  }

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;

 private:
  std::size_t n_;
  double h_;
  double r_max_;
};

// Rejects n < 16 and r_max <= 1 with a kConfig error.
RadialGrid build_grid(std::size_t n, double r_max);

// Complex radial profile sampled at the grid nodes.
struct RadialField {
  RadialGrid grid;
  std::vector<Complex> values;

  explicit RadialField(const RadialGrid& g);
  RadialField(const RadialGrid& g, std::vector<Complex> v);

  static RadialField from_function(const RadialGrid& g,
                                   const std::function<Complex(double)>& fn);

  std::size_t size() const noexcept { return values.size(); }
  Complex& operator[](std::size_t j) { return values[j]; }
  const Complex& operator[](std::size_t j) const { return values[j]; }

  // Throws kNumerical if any entry is NaN or infinite.
  void check_finite() const;

  RadialField& operator*=(Complex c);
};

RadialField operator*(Complex c, RadialField f);
RadialField operator*(double c, RadialField f);

// 4 pi h sum_j g_j r_j^2.
double integrate(const RadialGrid& grid, std::span<const double> samples);

// Integral of |u|^2 and |u|^4 with the node quadrature.
double l2_norm_sq(const RadialField& u);
double l4_norm_4(const RadialField& u);

// Integral of |d_r u|^2 with face differences: zero flux at r = 0, one-sided
// Dirichlet difference at r = r_max.
double gradient_norm_sq(const RadialField& u);

// Integral of gamma r^{-mu} |u|^2.
double potential_integral(const RadialField& u, const EquationParams& params);

// Tridiagonal representation of the discrete Delta - gamma r^{-mu}:
// (L u)_j = lower_j u_{j-1} + diag_j u_j + upper_j u_{j+1}. The operator is
// symmetric with respect to the node quadrature inner product and its
// quadratic form equals gradient_norm_sq + potential_integral.
struct LapGamma {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  LapGamma(const RadialGrid& grid, const EquationParams& params);

  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  void apply(std::span<const double> in, std::span<double> out) const;
};

RadialField apply_lap_gamma(const RadialField& u, const EquationParams& params);

// Solves a tridiagonal system in place (Thomas algorithm). rhs is overwritten
// by the solution. Throws kInternal on a vanishing pivot.
template <typename T>
void solve_tridiagonal(std::span<const T> lower, std::span<const T> diag,
                       std::span<const T> upper, std::span<T> rhs);

// Crank-Nicolson propagator for i u_t = -(Delta_gamma + i W) u, where W >= 0
// is an optional absorbing profile (empty means none). Factorizations are
// cached per step size, so one instance must not be shared between threads.
class CrankNicolson {
 public:
  CrankNicolson(const RadialGrid& grid, const EquationParams& params,
                std::vector<double> absorb = {});

  void propagate(std::span<Complex> u, double tau) const;

  const LapGamma& op() const noexcept { return op_; }

 private:
  struct Factor {
    std::vector<Complex> c_prime;
    std::vector<Complex> inv_denom;
  };
  const Factor& factor(double tau) const;

  RadialGrid grid_;
  LapGamma op_;
  std::vector<double> absorb_;
  mutable std::map<double, Factor> cache_;
  mutable std::vector<Complex> work_;
};

// One Crank-Nicolson step without absorption:
// (I - i tau/2 Delta_gamma) v = (I + i tau/2 Delta_gamma) u.
RadialField solve_cn(const RadialField& u_rhs, double tau,
                     const EquationParams& params);

}  // namespace nlsrad
