#pragma once

#include <compare>
#include <vector>

#include "nlsrad/grid.hpp"

namespace nlsrad {

// Exponents (alpha, beta) of the scaling f -> e^{alpha l} f(e^{beta l} .).
// Admissible pairs satisfy alpha > 0, beta >= 0 and 2 alpha - 3 beta >= 0.
struct ScalingPair {
  double alpha = 1.0;
  double beta = 0.0;

  auto operator<=>(const ScalingPair&) const = default;
};

bool admissible(const ScalingPair& pair) noexcept;
// Throws kPrecondition for a pair outside the admissible cone.
void validate(const ScalingPair& pair);

inline constexpr ScalingPair kNehariPair{1.0, 0.0};
inline constexpr ScalingPair kVirialPair{3.0, 2.0};

// (1,0), (3,2), (2,1), (3,0), (3,1): interior and boundary of the cone.
const std::vector<ScalingPair>& default_pairs();

struct FunctionalReport {
  double mass = 0.0;
  double kinetic = 0.0;
  double potential_term = 0.0;
  double quartic = 0.0;
  double energy = 0.0;
  double action = 0.0;
  double sobolev_gamma_sq = 0.0;   // kinetic + potential_term
  double h1_omega_gamma_sq = 0.0;  // omega * mass + sobolev_gamma_sq
};

FunctionalReport report(const RadialField& f, const EquationParams& params);

// Derivative at l = 0 of the action along the (alpha, beta) scaling. Each
// term of the action is homogeneous under the scaling, so the derivative is
// a fixed linear combination of the report entries.
double k_alpha_beta(const FunctionalReport& rep, const ScalingPair& pair,
                    const EquationParams& params);
double k_alpha_beta(const RadialField& f, const ScalingPair& pair,
                    const EquationParams& params);

double nehari(const RadialField& f, const EquationParams& params);
double virial(const RadialField& f, const EquationParams& params);

// action - K^{alpha,beta} / (2 alpha - beta).
double t_alpha_beta(const RadialField& f, const ScalingPair& pair,
                    const EquationParams& params);

// Amplitude lambda with nehari(lambda f) = 0, i.e. sqrt(h1 / quartic).
double nehari_scaling(const FunctionalReport& rep);

// Samples e^{log_amplitude} f(e^{log_dilation} r) back onto f's grid using
// monotone (Fritsch-Carlson) cubic interpolation of the real and imaginary
// parts. The field is extended evenly across r = 0 and by zero past r_max.
// Throws kPrecondition if the rescaled field would carry non-negligible
// values past r_max.
RadialField rescale(const RadialField& f, double log_amplitude, double log_dilation);

struct FdCheck {
  double analytic = 0.0;
  double finite_difference = 0.0;
};

// Central difference of the action along the (alpha, beta) scaling with
// half-width eps, next to the closed-form value.
FdCheck fd_check_k(const RadialField& f, const ScalingPair& pair,
                   const EquationParams& params, double eps);

// ||f||_{L4(r>=R)}^4 / (R^{-2} ||f||_{L2(r>=R)}^3 ||d_r f||_{L2(r>=R)}).
double radial_sobolev_ratio(const RadialField& f, double radius);

}  // namespace nlsrad
