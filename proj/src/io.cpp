#include "nlsrad/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nlsrad {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string pair_key(const ScalingPair& pair) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", pair.alpha, pair.beta);
  return buf;
}

std::string profile_csv(const RadialField& q) {
  std::ostringstream os;
  os << "r,Q\n";
  for (std::size_t j = 0; j < q.size(); ++j) {
    os << format_double(q.grid.node(j)) << ',' << format_double(q[j].real()) << '\n';
  }
  return os.str();
}

std::string field_csv(const RadialField& u) {
  std::ostringstream os;
  os << "r,re,im\n";
  for (std::size_t j = 0; j < u.size(); ++j) {
    os << format_double(u.grid.node(j)) << ',' << format_double(u[j].real()) << ','
       << format_double(u[j].imag()) << '\n';
  }
  return os.str();
}

std::string trace_csv(const EvolutionTrace& trace) {
  std::ostringstream os;
  os << "t,mass_drift,energy_drift,l4,grad,K_gamma,k_bound_ok\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    os << format_double(trace.times[i]) << ',' << format_double(trace.mass_drift[i]) << ','
       << format_double(trace.energy_drift[i]) << ',' << format_double(trace.l4_norm[i]) << ','
       << format_double(trace.grad_norm[i]) << ',' << format_double(trace.virial_k[i]) << ','
       << (trace.k_lower_bound_ok[i] ? 1 : 0) << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const FunctionalReport& rep) {
  return {{"mass", rep.mass},
          {"kinetic", rep.kinetic},
          {"potential_term", rep.potential_term},
          {"quartic", rep.quartic},
          {"energy", rep.energy},
          {"action", rep.action},
          {"sobolev_gamma_sq", rep.sobolev_gamma_sq},
          {"h1_omega_gamma_sq", rep.h1_omega_gamma_sq}};
}

nlohmann::json to_json(const GroundStateResult& result) {
  nlohmann::json k = nlohmann::json::object();
  for (const auto& [pair, value] : result.k_residuals) k[pair_key(pair)] = value;
  return {{"level", result.level},
          {"ode_residual", result.ode_residual},
          {"k_residuals", k},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"central_amplitude", result.central_amplitude},
          {"functionals", to_json(result.functionals)}};
}

nlohmann::json to_json(const EvolutionTrace& trace) {
  return {{"outcome", to_string(trace.outcome)},
          {"note", trace.note},
          {"final_time", trace.final_time},
          {"steps", trace.steps},
          {"rejected", trace.rejected},
          {"min_dt", trace.min_dt},
          {"samples", trace.times.size()}};
}

nlohmann::json to_json(const MassEnergyCriterion& me) {
  nlohmann::json j = {{"product_ME", nullptr},
                      {"product_grad", me.product_grad},
                      {"threshold_ME", me.threshold_me},
                      {"threshold_grad", me.threshold_grad},
                      {"negative_energy", me.negative_energy},
                      {"me_below", me.me_below},
                      {"grad_below", me.grad_below},
                      {"grad_above", me.grad_above},
                      {"boundary", me.boundary},
                      {"bounded_branch", me.bounded_branch},
                      {"blowup_branch", me.blowup_branch}};
  if (!me.negative_energy) j["product_ME"] = me.product_me;
  return j;
}

nlohmann::json to_json(const ClassificationVerdict& v) {
  nlohmann::json signs = nlohmann::json::object();
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [pair, s] : v.k_signs) signs[pair_key(pair)] = s;
  for (const auto& [pair, k] : v.k_values) values[pair_key(pair)] = k;
  nlohmann::json j = {{"s_value", v.s_value},
                      {"level", v.level},
                      {"below_threshold", v.below_threshold},
                      {"K_gamma", v.k_gamma},
                      {"k_signs", signs},
                      {"k_values", values},
                      {"unanimous", v.unanimous},
                      {"predicted", to_string(v.predicted)},
                      {"empirical", to_string(v.empirical)}};
  if (v.me_criterion) j["me_criterion"] = to_json(*v.me_criterion);
  if (!v.outcome.empty()) {
    j["outcome"] = v.outcome;
    j["note"] = v.note;
    j["observed_k_floor"] = v.observed_k_floor;
    j["agree"] = agrees(v);
  }
  return j;
}

nlohmann::json to_json(const VirialTerms& t) {
  return {{"F1", t.f1},       {"grad", t.grad},   {"F2", t.f2},     {"F3", t.f3},
          {"pot", t.pot},     {"formula", t.formula}, {"K_gamma", t.k_gamma},
          {"R1", t.r1},       {"R2", t.r2},       {"R3", t.r3},     {"R4", t.r4},
          {"decomposition", t.decomposition}};
}

nlohmann::json to_json(const RigidityReport& r) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& tick : r.ticks) {
    nlohmann::json j = to_json(tick.terms);
    j["t"] = tick.t;
    j["I"] = tick.i;
    j["Iprime"] = tick.i_prime;
    j["Iprime_bound"] = tick.i_prime_bound;
    terms.push_back(std::move(j));
  }
  return {{"R", r.R},
          {"R_initial", r.r_initial},
          {"delta0", r.delta0},
          {"remainder_constant", r.remainder_constant},
          {"tail0", r.tail0},
          {"tail_max", r.tail_max},
          {"min_Ipp", r.min_ipp},
          {"bound_ok", r.bound_ok},
          {"Iprime_max", r.iprime_max},
          {"Iprime_bound_ok", r.iprime_bound_ok},
          {"outcome", to_string(r.outcome)},
          {"terms", terms}};
}

void write_text(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorKind::kConfig, "cannot write " + path);
  out << content;
  if (!out) fail(ErrorKind::kConfig, "write failed for " + path);
}

}  // namespace nlsrad
