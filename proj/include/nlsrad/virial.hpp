#pragma once

#include <array>
#include <vector>

#include "nlsrad/evolve.hpp"
#include "nlsrad/functionals.hpp"
#include "nlsrad/grid.hpp"

namespace nlsrad {

// Base cutoff X(s): s^2 on [0, 1], a degree-7 bridge on [1, 3] and the
// constant X(3) beyond. Returns X, X', X'', X''', X'''' at s.
std::array<double, 5> cutoff_profile(double s);

// Value of X on the plateau s >= 3.
inline constexpr double kCutoffPlateau = 31.0 / 7.0;

// Samples of w(r) = R^2 X(r / R) and its radial derivatives. Node arrays
// follow the grid nodes; the face arrays hold w' and w'' at the faces
// (including the outer face at R_max), where gradients live.
struct VirialCutoff {
  double R = 1.0;
  std::vector<double> w, w1, w2, w3, w4;
  std::vector<double> w1_face, w2_face;
};

// Throws kConfig unless R > 0 and 3R < R_max; kInternal if the bridge
// violates X'' <= 2 on a fine sample.
VirialCutoff build_cutoff(double R, const RadialGrid& grid);

// Constant C with |R1 + R2 + R3 + R4| <= C * tail(u, R) for R >= 1, taken
// from sup bounds of the bridge derivatives.
double remainder_constant(const EquationParams& params);

// Integral over r >= R of |u_r|^2 + |u|^4 + R^{-mu} |u|^2.
double tail_integral(const RadialField& u, double R, const EquationParams& params);

struct VirialTerms {
  // Formula form.
  double f1 = 0.0;    // int F1 |x.grad u|^2
  double grad = 0.0;  // 4 int (w'/r) |grad u|^2
  double f2 = 0.0;    // int F2 |u|^2
  double f3 = 0.0;    // int F3 |u|^4
  double pot = 0.0;   // 2 mu int w' gamma r^{-mu-1} |u|^2
  double formula = 0.0;
  // Decomposition form: 4 K_gamma + R1 + R2 + R3 + R4.
  double k_gamma = 0.0;
  double r1 = 0.0;  // gradient remainder
  double r2 = 0.0;  // quartic remainder
  double r3 = 0.0;  // mass remainder
  double r4 = 0.0;  // potential remainder
  double decomposition = 0.0;
};

double i_value(const RadialField& u, const VirialCutoff& cut);
double i_prime(const RadialField& u, const VirialCutoff& cut);
VirialTerms i_double_prime(const RadialField& u, const VirialCutoff& cut,
                           const EquationParams& params);

struct ProbeTick {
  double t = 0.0;
  double i = 0.0;
  double i_prime = 0.0;
  double i_prime_bound = 0.0;  // 2 R max X' ||u|| ||u_r||
  VirialTerms terms;
};

struct RigidityReport {
  double R = 0.0;
  double r_initial = 0.0;  // smallest ladder radius passing on u0 alone
  double tail_max = 0.0;   // largest tail(u(t), R) over the monitored times
  double delta0 = 0.0;
  double remainder_constant = 0.0;
  double tail0 = 0.0;
  double min_ipp = 0.0;
  bool bound_ok = false;          // min I'' >= delta0 / 2
  double iprime_max = 0.0;
  bool iprime_bound_ok = false;   // |I'| within the linear bound at every tick
  Outcome outcome = Outcome::kRanToEnd;
  std::vector<ProbeTick> ticks;
};

// Runs the flow of u0 to cfg.t_end (absorbing layer forced off) and picks the
// smallest R > 1 on a geometric ladder with C * tail(u(t), R) < delta0 / 2 at
// every monitored time, starting with u0. A second run tracks I, I', I'' at
// every monitor tick. Throws kPrecondition unless
// S(u0) < level and K_gamma(u0) > 0, and kConfig when no admissible R fits
// inside the domain.
RigidityReport rigidity_probe(const RadialField& u0, const EquationParams& params,
                              double level, const EvolutionConfig& cfg);

}  // namespace nlsrad
