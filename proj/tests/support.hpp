#pragma once

#include <cmath>
#include <random>

#include "nlsrad/grid.hpp"

namespace testing_support {

using nlsrad::Complex;

// Sum of two Gaussians with a quadratic phase on the second one. Smooth,
// radial and decaying well inside any domain with R_max >= 16.
inline nlsrad::RadialField random_field(const nlsrad::RadialGrid& g, std::mt19937_64& rng,
                                        double scale = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a1 = scale * (0.5 + 2.0 * u(rng));
  const double w1 = 0.5 + 1.5 * u(rng);
  const double a2 = scale * u(rng);
  const double w2 = 0.5 + 2.0 * u(rng);
  const double phase = u(rng);
  return nlsrad::RadialField::from_function(g, [=](double r) {
    const Complex twist{std::cos(phase * r * r), std::sin(phase * r * r)};
    return a1 * std::exp(-r * r / (w1 * w1)) + a2 * std::exp(-r * r / (w2 * w2)) * twist;
  });
}

inline nlsrad::RadialField gaussian(const nlsrad::RadialGrid& g, double amplitude = 1.0,
                                    double width = 1.0) {
  return nlsrad::RadialField::from_function(g, [=](double r) {
    const double s = r / width;
    return Complex{amplitude * std::exp(-s * s), 0.0};
  });
}

// Closed forms for f = exp(-r^2) in three dimensions with gamma = mu = 1.
inline double gaussian_mass() { return std::pow(nlsrad::kPi / 2.0, 1.5); }
inline double gaussian_kinetic() { return 3.0 * gaussian_mass(); }
inline double gaussian_potential() { return nlsrad::kPi; }
inline double gaussian_quartic() { return std::pow(nlsrad::kPi / 4.0, 1.5); }

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing_support
