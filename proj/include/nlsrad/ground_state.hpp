#pragma once

#include <map>
#include <utility>
#include <vector>

#include "nlsrad/functionals.hpp"
#include "nlsrad/grid.hpp"

namespace nlsrad {

struct GroundStateOptions {
  int max_iter = 20000;
  double tol_decrease = 1e-12;  // relative decrease of the quotient
  double tol_grad = 1e-10;      // relative H^1_{omega,gamma} norm of the gradient
  double tol_k = 1e-4;          // K residual tolerance relative to h1_omega_gamma_sq
  // The potential may vanish; used for the free reference state Q_{1,0}.
  bool allow_free_limit = false;
  // Refine the descent minimizer with Newton steps on the Euler-Lagrange
  // equation. The level is still the quotient at the refined profile.
  bool newton_polish = true;
};

struct GroundStateResult {
  RadialField profile;
  double level = 0.0;
  double ode_residual = 0.0;
  std::map<ScalingPair, double> k_residuals;
  int iterations = 0;
  bool converged = false;
  FunctionalReport functionals;
  // Shooting only: central amplitude Q(0).
  double central_amplitude = 0.0;

  explicit GroundStateResult(const RadialGrid& g) : profile(g) {}
};

// Pairs whose K residual is recorded in every result.
const std::vector<ScalingPair>& residual_pairs();

// Minimizes h1_omega_gamma_sq(f)^2 / (4 quartic(f)) over real radial fields
// by gradient descent in the H^1_{omega,gamma} metric with backtracking, and
// returns the minimizer placed on the Nehari set. Non-convergence returns the
// last iterate with converged == false.
GroundStateResult minimize_quotient(const EquationParams& params, const RadialGrid& grid,
                                    const GroundStateOptions& opts = {});

// Independent check: bisection on Q(0) for the radial ODE
//   Q'' + (2/r) Q' - omega Q - gamma r^{-mu} Q + Q^3 = 0,
// integrated with RK4 on sub-steps of the grid spacing. The level and the
// functionals come from quadratures carried along the ODE, not from the grid.
GroundStateResult shoot_ode(const EquationParams& params, const RadialGrid& grid,
                            std::pair<double, double> a0_bracket,
                            bool allow_free_limit = false, int substeps = 4);

// K^{alpha,beta}(Q) for each pair.
std::map<ScalingPair, double> validate_pohozaev(const GroundStateResult& result,
                                                const EquationParams& params,
                                                const std::vector<ScalingPair>& pairs);

// Quadrature norm of -omega Q + Delta_gamma Q + |Q|^2 Q.
double stationary_residual(const RadialField& q, const EquationParams& params);

}  // namespace nlsrad
