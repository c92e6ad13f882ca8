#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlsrad/functionals.hpp"
#include "nlsrad/grid.hpp"

namespace nlsrad {

struct EvolutionConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int monitor_every = 10;
  bool absorb = false;
  double absorb_width = 8.0;
  double absorb_strength = 5.0;   // peak of the absorbing profile
  double blowup_grad_factor = 10.0;
  double decay_window = 5.0;
  double local_tol = 1e-6;        // step-doubling tolerance (relative)
  bool adaptive = true;
  // Threshold level r_{omega,gamma}; enables the K lower-bound monitor.
  std::optional<double> level;
};

// Throws kConfig on invalid settings (dt > h, absorb_width >= R_max / 4, ...).
void validate(const EvolutionConfig& cfg, const RadialGrid& grid);

enum class Outcome { kRanToEnd, kBlowupDetected, kDecayDetected, kAborted };

std::string to_string(Outcome o);

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> mass_drift;
  std::vector<double> energy_drift;
  std::vector<double> l4_norm;
  std::vector<double> grad_norm;
  std::vector<double> virial_k;
  std::vector<bool> k_lower_bound_ok;
  Outcome outcome = Outcome::kRanToEnd;
  std::string note;
  double final_time = 0.0;
  int steps = 0;
  int rejected = 0;
  double min_dt = 0.0;
};

// Strang splitting: half nonlinear phase, Crank-Nicolson linear step, half
// nonlinear phase. Both sub-flows preserve the discrete L2 norm exactly.
RadialField step(const RadialField& u, double dt, const EquationParams& params);

// Checks K_gamma(u) >= min{level - S0, (2 mu / 7) ||(-Delta_gamma)^{1/2} u||^2} - tol.
bool monitor_k_bound(const RadialField& u_t, double s0, double level,
                     const EquationParams& params, double tol = 1e-6);
bool monitor_k_bound(const FunctionalReport& rep, double s0, double level,
                     const EquationParams& params, double tol = 1e-6);

// Cubic ramp on [R_max - width, R_max] reaching `strength` at R_max.
std::vector<double> absorbing_profile(const RadialGrid& grid, double width, double strength);

// Called at every monitor tick with the current time and state.
using SnapshotHook = std::function<void(double, const RadialField&)>;

class Evolver {
 public:
  Evolver(const RadialGrid& grid, const EquationParams& params, const EvolutionConfig& cfg);

  // One Strang step with the configured absorbing layer.
  void advance(RadialField& u, double dt) const;

  EvolutionTrace run(const RadialField& u0, const SnapshotHook& hook = {}) const;

 private:
  // Integrates [t, t + span] with the adaptive controller. Returns false on
  // dt underflow or a non-finite state.
  bool integrate(RadialField& u, double& t, double t_target, double& dt, double dt_max,
                 EvolutionTrace& trace) const;

  RadialGrid grid_;
  EquationParams params_;
  EvolutionConfig cfg_;
  CrankNicolson cn_;
};

EvolutionTrace run(const RadialField& u0, const EvolutionConfig& cfg,
                   const EquationParams& params);

}  // namespace nlsrad
