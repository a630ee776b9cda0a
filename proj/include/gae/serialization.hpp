#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "gae/estimation.hpp"
#include "gae/homomorphism.hpp"
#include "gae/process.hpp"

namespace gae {

using Json = nlohmann::json;

/// {num_states, num_actions, transitions[s][a][s'], initial_dist}
Json process_to_json(const ControlledProcess& p);
/// Throws ConfigError on malformed documents and ParameterError when the
/// kernel or initial distribution is not stochastic.
ControlledProcess process_from_json(const Json& doc);

/// {state_map, action_maps}
Json homomorphism_to_json(const Homomorphism& h);
Homomorphism homomorphism_from_json(const Json& doc);

/// {state_perms, action_perms (optional)}
Json group_action_to_json(const GroupAction& g);
GroupAction group_action_from_json(const Json& doc);

/// CSV with columns state,count,mean,variance.
void write_estimates_csv(std::ostream& os, const std::vector<EstimateRow>& rows);

}  // namespace gae
