#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nlsrad/classify.hpp"
#include "nlsrad/evolve.hpp"
#include "nlsrad/functionals.hpp"
#include "nlsrad/ground_state.hpp"
#include "nlsrad/virial.hpp"

namespace nlsrad {

// %.17g, which round-trips every double.
std::string format_double(double x);

// "(alpha,beta)" with the shortest exact decimal for each entry.
std::string pair_key(const ScalingPair& pair);

// CSV with columns r,Q (real part of the profile).
std::string profile_csv(const RadialField& q);
// CSV with columns r,re,im.
std::string field_csv(const RadialField& u);
// CSV with columns t,mass_drift,energy_drift,l4,grad,K_gamma,k_bound_ok.
std::string trace_csv(const EvolutionTrace& trace);

nlohmann::json to_json(const FunctionalReport& rep);
nlohmann::json to_json(const GroundStateResult& result);
nlohmann::json to_json(const EvolutionTrace& trace);  // summary, no series
nlohmann::json to_json(const MassEnergyCriterion& me);
nlohmann::json to_json(const ClassificationVerdict& verdict);
nlohmann::json to_json(const VirialTerms& terms);
nlohmann::json to_json(const RigidityReport& report);

// Creates parent directories as needed. Throws kConfig if the file cannot be
// written.
void write_text(const std::string& path, const std::string& content);

}  // namespace nlsrad
