#pragma once

// JSON forms of valuations, witnesses and certificates.
//
// Witness: {"n": int, "valuation": {atom: [[gens], ...]}, "world": [gens],
// "formula": string}. Worlds are sorted generator lists; a valuation lists
// every member of each up-set in ascending mask order. Decomposition and
// admissibility certificates add "sigma", "bodies", "countermodels" and
// friends on top of that. Readers validate strictly and throw
// std::invalid_argument with a description of the first problem.

#include <json.hpp>

#include "mlogic/frame.hpp"
#include "mlogic/kp.hpp"
#include "mlogic/search.hpp"
#include "mlogic/structural.hpp"

namespace mlogic {

using Json = nlohmann::ordered_json;

Json world_to_json(World w);
/// Sorted, duplicate-free generator list of a world of M_n.
World world_from_json(const Json& j, int n);

Json valuation_to_json(const Valuation& v);
/// Each list must be an up-set of M_n.
Valuation valuation_from_json(const Json& j, int n);

Json witness_to_json(const RefutationWitness& w);
RefutationWitness witness_from_json(const Json& j);

Json substitution_to_json(const Substitution& s);
Json assignment_to_json(const Assignment& a);
Json frame_checks_to_json(const std::vector<FrameCheck>& checks);

Json levin_to_json(const LevinDecomposition& d);
Json admissibility_to_json(const AdmissibilityWitness& w);

/// {"source": m, "target": n, "map": [{"world": [...], "image": [...]}]}.
/// The map either lists every world of M_m or only the maximal ones, in
/// which case the rest follow by meets.
Json pmorphism_to_json(const PMorphism& f);
PMorphism pmorphism_from_json(const Json& j);

/// Reads a whole file and parses it; errors become std::invalid_argument.
Json read_json_file(const std::string& path);

} // namespace mlogic
