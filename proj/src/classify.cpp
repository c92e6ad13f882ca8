#include "nlsrad/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

namespace nlsrad {

std::string to_string(Prediction p) {
  switch (p) {
    case Prediction::kScatter: return "scatter";
    case Prediction::kBlowup: return "blowup";
    case Prediction::kOutOfScope: return "out_of_scope";
  }
  return "unknown";
}

std::string to_string(Empirical e) {
  switch (e) {
    case Empirical::kDecay: return "decay";
    case Empirical::kBlowup: return "blowup";
    case Empirical::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

bool agrees(const ClassificationVerdict& v) {
  return (v.predicted == Prediction::kScatter && v.empirical == Empirical::kDecay) ||
         (v.predicted == Prediction::kBlowup && v.empirical == Empirical::kBlowup);
}

MassEnergyCriterion mass_energy_criterion(const RadialField& u0, const EquationParams& params,
                                          const GroundStateResult& q10) {
  require(q10.converged, ErrorKind::kPrecondition, "free ground state did not converge");
  require(q10.functionals.potential_term == 0.0, ErrorKind::kPrecondition,
          "reference state must be computed with gamma = 0");
  const auto rep = report(u0, params);
  const auto& ref = q10.functionals;

  MassEnergyCriterion me;
  me.threshold_me = std::sqrt(ref.mass) * std::sqrt(ref.energy);
  me.threshold_grad = std::pow(ref.mass * ref.kinetic, 0.25);
  me.product_grad = std::pow(rep.mass * rep.kinetic, 0.25);
  me.negative_energy = rep.energy < 0.0;
  if (me.negative_energy) {
    me.product_me = std::nan("");
  } else {
    me.product_me = std::sqrt(rep.mass) * std::sqrt(rep.energy);
    me.me_below = me.product_me < me.threshold_me;
    me.boundary = std::abs(me.product_me - me.threshold_me) <= 1e-8 * me.threshold_me;
  }
  me.grad_below = me.product_grad < me.threshold_grad;
  me.grad_above = me.product_grad > me.threshold_grad;
  me.bounded_branch = me.me_below && me.grad_below;
  me.blowup_branch = me.negative_energy || (me.me_below && me.grad_above);
  return me;
}

ClassificationVerdict classify(const RadialField& u0, const EquationParams& params,
                               const GroundStateResult& ground,
                               const std::vector<ScalingPair>& pairs,
                               const GroundStateResult* q10) {
  require(ground.converged, ErrorKind::kPrecondition, "ground state did not converge");
  require(ground.profile.grid == u0.grid, ErrorKind::kPrecondition,
          "datum and ground state live on different grids");
  u0.check_finite();
  const auto rep = report(u0, params);

  ClassificationVerdict v;
  v.s_value = rep.action;
  v.level = ground.level;
  v.below_threshold = rep.action < ground.level;
  v.k_gamma = k_alpha_beta(rep, kVirialPair, params);
  for (const auto& pair : pairs) {
    validate(pair);
    const double k = k_alpha_beta(rep, pair, params);
    v.k_values[pair] = k;
    v.k_signs[pair] = k >= 0.0 ? 1 : -1;
  }
  const int gamma_sign = v.k_gamma >= 0.0 ? 1 : -1;
  v.unanimous = std::all_of(v.k_signs.begin(), v.k_signs.end(),
                            [&](const auto& kv) { return kv.second == gamma_sign; });
  if (!v.below_threshold) {
    v.predicted = Prediction::kOutOfScope;
  } else {
    v.predicted = gamma_sign > 0 ? Prediction::kScatter : Prediction::kBlowup;
  }
  if (q10 != nullptr) v.me_criterion = mass_energy_criterion(u0, params, *q10);
  return v;
}

SignSplitReport sign_splitting_check(const std::vector<RadialField>& family,
                                     const EquationParams& params,
                                     const GroundStateResult& ground,
                                     const std::vector<ScalingPair>& pairs) {
  SignSplitReport out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto rep = report(family[i], params);
    if (!(rep.action < ground.level)) {
      out.skipped.push_back(i);
      continue;
    }
    ++out.checked;
    SignViolation entry;
    entry.index = i;
    int positive = 0;
    for (const auto& pair : pairs) {
      const double k = k_alpha_beta(rep, pair, params);
      entry.k_values[pair] = k;
      if (k >= 0.0) ++positive;
    }
    if (positive != 0 && positive != static_cast<int>(pairs.size())) {
      out.violations.push_back(std::move(entry));
    }
  }
  return out;
}

ClassificationVerdict verify_empirically(ClassificationVerdict verdict, const RadialField& u0,
                                         EvolutionConfig cfg, const EquationParams& params) {
  require(verdict.predicted != Prediction::kOutOfScope, ErrorKind::kPrecondition,
          "datum is at or above the threshold; nothing to verify");
  cfg.absorb = verdict.predicted == Prediction::kScatter;
  cfg.level = verdict.level;
  const auto trace = run(u0, cfg, params);
  verdict.outcome = to_string(trace.outcome);
  verdict.note = trace.note;
  verdict.observed_k_floor = trace.virial_k.empty()
                                 ? 0.0
                                 : *std::min_element(trace.virial_k.begin(), trace.virial_k.end());
  switch (trace.outcome) {
    case Outcome::kDecayDetected: verdict.empirical = Empirical::kDecay; break;
    case Outcome::kBlowupDetected: verdict.empirical = Empirical::kBlowup; break;
    default: verdict.empirical = Empirical::kInconclusive; break;
  }
  return verdict;
}

namespace {

RadialField family_member(const FamilySpec& spec, const GroundStateResult& ground,
                          double amplitude, double width) {
  if (spec.kind == FamilySpec::Kind::kScaledGround) return amplitude * ground.profile;
  return RadialField::from_function(ground.profile.grid, [&](double r) {
    const double s = r / width;
    return Complex{amplitude * std::exp(-s * s), 0.0};
  });
}

SweepRow run_row(const FamilySpec& spec, const EquationParams& params,
                 const GroundStateResult& ground, const EvolutionConfig& cfg, bool simulate,
                 double amplitude, double width) {
  SweepRow row;
  row.amplitude = amplitude;
  row.width = width;
  try {
    const RadialField u0 = family_member(spec, ground, amplitude, width);
    row.verdict = classify(u0, params, ground);
    if (simulate && row.verdict.predicted != Prediction::kOutOfScope) {
      row.verdict = verify_empirically(row.verdict, u0, cfg, params);
      row.simulated = true;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::vector<SweepRow> sweep(const FamilySpec& spec, const EquationParams& params,
                            const GroundStateResult& ground, const EvolutionConfig& cfg,
                            bool simulate, int workers) {
  require(workers >= 1, ErrorKind::kConfig, "workers must be >= 1");
  if (spec.kind == FamilySpec::Kind::kGaussian && !spec.amplitudes.empty()) {
    require(!spec.widths.empty(), ErrorKind::kConfig, "Gaussian family needs widths");
    for (double w : spec.widths) require(w > 0.0, ErrorKind::kConfig, "widths must be positive");
  }
  std::vector<std::pair<double, double>> jobs;
  for (double c : spec.amplitudes) {
    if (spec.kind == FamilySpec::Kind::kScaledGround) {
      jobs.emplace_back(c, 0.0);
    } else {
      for (double w : spec.widths) jobs.emplace_back(c, w);
    }
  }
  std::vector<SweepRow> rows(jobs.size());
  std::size_t next = 0;
  while (next < jobs.size()) {
    std::vector<std::future<SweepRow>> batch;
    const std::size_t stop = std::min(jobs.size(), next + static_cast<std::size_t>(workers));
    for (std::size_t i = next; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, run_row, std::cref(spec), std::cref(params),
                                 std::cref(ground), std::cref(cfg), simulate, jobs[i].first,
                                 jobs[i].second));
    }
    for (std::size_t i = next; i < stop; ++i) rows[i] = batch[i - next].get();
    next = stop;
  }
  return rows;
}

std::string sweep_csv(const FamilySpec& spec, const std::vector<SweepRow>& rows) {
  const bool gaussian = spec.kind == FamilySpec::Kind::kGaussian;
  std::ostringstream os;
  os << "amplitude" << (gaussian ? ",width" : "")
     << ",S,below_threshold,K_gamma,unanimous,predicted,empirical,agree,error\n";
  for (const auto& row : rows) {
    const auto& v = row.verdict;
    os << fmt(row.amplitude);
    if (gaussian) os << ',' << fmt(row.width);
    if (!row.error.empty()) {
      os << ",,,,,,,," << '"' << row.error << '"' << '\n';
      continue;
    }
    os << ',' << fmt(v.s_value) << ',' << (v.below_threshold ? "true" : "false") << ','
       << fmt(v.k_gamma) << ',' << (v.unanimous ? "true" : "false") << ','
       << to_string(v.predicted) << ',' << to_string(v.empirical) << ','
       << (row.simulated ? (agrees(v) ? "true" : "false") : "na") << ",\n";
  }
  return os.str();
}

}  // namespace nlsrad
