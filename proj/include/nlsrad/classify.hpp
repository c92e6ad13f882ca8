#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlsrad/evolve.hpp"
#include "nlsrad/functionals.hpp"
#include "nlsrad/ground_state.hpp"
#include "nlsrad/grid.hpp"

namespace nlsrad {

enum class Prediction { kScatter, kBlowup, kOutOfScope };
enum class Empirical { kDecay, kBlowup, kInconclusive };

std::string to_string(Prediction p);
std::string to_string(Empirical e);

// Mass-energy comparison with the free ground state Q_{1,0}, s_c = 1/2.
struct MassEnergyCriterion {
  double product_me = 0.0;      // M^{1/2} E^{1/2}; NaN when E < 0
  double product_grad = 0.0;    // ||u||^{1/2} ||grad u||^{1/2}
  double threshold_me = 0.0;
  double threshold_grad = 0.0;
  bool negative_energy = false;
  bool me_below = false;        // product_me < threshold_me
  bool grad_below = false;      // product_grad < threshold_grad
  bool grad_above = false;      // product_grad > threshold_grad
  bool boundary = false;        // product_me equals threshold_me within 1e-8
  bool bounded_branch = false;  // me_below and grad_below
  bool blowup_branch = false;   // negative energy, or me_below and grad_above
};

struct ClassificationVerdict {
  double s_value = 0.0;
  double level = 0.0;
  bool below_threshold = false;
  double k_gamma = 0.0;
  std::map<ScalingPair, double> k_values;
  std::map<ScalingPair, int> k_signs;  // +1 for K >= 0, -1 for K < 0
  bool unanimous = true;
  Prediction predicted = Prediction::kOutOfScope;
  Empirical empirical = Empirical::kInconclusive;
  std::optional<MassEnergyCriterion> me_criterion;
  // Filled by verify_empirically.
  std::string outcome;
  std::string note;
  double observed_k_floor = 0.0;  // min_t K_gamma(u(t)) over the run
};

bool agrees(const ClassificationVerdict& v);

// Throws kPrecondition unless ground converged. The mass-energy record is
// filled when q10 is given.
ClassificationVerdict classify(const RadialField& u0, const EquationParams& params,
                               const GroundStateResult& ground,
                               const std::vector<ScalingPair>& pairs = default_pairs(),
                               const GroundStateResult* q10 = nullptr);

// q10 must be a converged ground state with vanishing potential term.
MassEnergyCriterion mass_energy_criterion(const RadialField& u0, const EquationParams& params,
                                          const GroundStateResult& q10);

struct SignViolation {
  std::size_t index = 0;
  std::map<ScalingPair, double> k_values;
};

struct SignSplitReport {
  std::size_t checked = 0;
  std::vector<std::size_t> skipped;  // S >= level
  std::vector<SignViolation> violations;
};

SignSplitReport sign_splitting_check(const std::vector<RadialField>& family,
                                     const EquationParams& params,
                                     const GroundStateResult& ground,
                                     const std::vector<ScalingPair>& pairs = default_pairs());

// Evolves u0 with the absorbing layer on for scatter predictions and off for
// blow-up predictions, then maps the trace outcome to the empirical label.
// Throws kPrecondition for out-of-scope verdicts.
ClassificationVerdict verify_empirically(ClassificationVerdict verdict, const RadialField& u0,
                                         EvolutionConfig cfg, const EquationParams& params);

struct FamilySpec {
  enum class Kind { kScaledGround, kGaussian };
  Kind kind = Kind::kScaledGround;
  std::vector<double> amplitudes;
  std::vector<double> widths;  // Gaussian only: c exp(-(r/w)^2)
};

struct SweepRow {
  double amplitude = 0.0;
  double width = 0.0;
  ClassificationVerdict verdict;
  bool simulated = false;
  std::string error;
};

// One row per datum in amplitude-major order. Rows are independent and are
// spread over `workers` threads. A failing row records its error and the
// sweep continues.
std::vector<SweepRow> sweep(const FamilySpec& spec, const EquationParams& params,
                            const GroundStateResult& ground, const EvolutionConfig& cfg,
                            bool simulate, int workers = 1);

std::string sweep_csv(const FamilySpec& spec, const std::vector<SweepRow>& rows);

}  // namespace nlsrad
