#include "gae/serialization.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include "gae/errors.hpp"

namespace gae {

namespace {

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object()) throw ConfigError("expected an object with field '" + std::string(key) + "'");
  const auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError("missing field '" + std::string(key) + "'");
  return *it;
}

template <typename T>
T get_as(const Json& value, const std::string& what) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("field '" + what + "' has the wrong type: " + e.what());
  }
}

}  // namespace

Json process_to_json(const ControlledProcess& p) {
  Json transitions = Json::array();
  for (StateId s = 0; s < p.num_states(); ++s) {
    Json per_state = Json::array();
    for (ActionId a = 0; a < p.num_actions(); ++a) {
      const auto row = p.row(s, a);
      per_state.push_back(std::vector<double>(row.begin(), row.end()));
    }
    transitions.push_back(std::move(per_state));
  }
  return Json{{"num_states", p.num_states()},
              {"num_actions", p.num_actions()},
              {"transitions", std::move(transitions)},
              {"initial_dist", p.initial_dist()}};
}

ControlledProcess process_from_json(const Json& doc) {
  const auto n = get_as<std::size_t>(field(doc, "num_states"), "num_states");
  const auto m = get_as<std::size_t>(field(doc, "num_actions"), "num_actions");
  const auto nested =
      get_as<std::vector<std::vector<std::vector<double>>>>(field(doc, "transitions"), "transitions");
  auto initial = get_as<std::vector<double>>(field(doc, "initial_dist"), "initial_dist");
  if (nested.size() != n) throw ConfigError("transitions must have num_states rows");
  std::vector<double> flat;
  flat.reserve(n * m * n);
  for (StateId s = 0; s < n; ++s) {
    if (nested[s].size() != m) {
      throw ConfigError("transitions[" + std::to_string(s) + "] must have num_actions rows");
    }
    for (ActionId a = 0; a < m; ++a) {
      if (nested[s][a].size() != n) {
        throw ConfigError("transitions[" + std::to_string(s) + "][" + std::to_string(a) +
                          "] must have num_states entries");
      }
      flat.insert(flat.end(), nested[s][a].begin(), nested[s][a].end());
    }
  }
  if (initial.size() != n) throw ConfigError("initial_dist must have num_states entries");
  ControlledProcess p(n, m, std::move(flat), std::move(initial));
  p.ensure_valid();
  return p;
}

Json homomorphism_to_json(const Homomorphism& h) {
  return Json{{"state_map", h.state_map()}, {"action_maps", h.action_maps()}};
}

Homomorphism homomorphism_from_json(const Json& doc) {
  return Homomorphism(get_as<std::vector<StateId>>(field(doc, "state_map"), "state_map"),
                      get_as<std::vector<std::vector<ActionId>>>(field(doc, "action_maps"),
                                                                 "action_maps"));
}

Json group_action_to_json(const GroupAction& g) {
  Json doc{{"state_perms", g.state_perms}};
  if (!g.action_perms.empty()) doc["action_perms"] = g.action_perms;
  return doc;
}

GroupAction group_action_from_json(const Json& doc) {
  GroupAction g;
  g.state_perms =
      get_as<std::vector<std::vector<StateId>>>(field(doc, "state_perms"), "state_perms");
  if (doc.contains("action_perms")) {
    g.action_perms = get_as<std::vector<std::vector<std::vector<ActionId>>>>(doc["action_perms"],
                                                                             "action_perms");
  }
  return g;
}

void write_estimates_csv(std::ostream& os, const std::vector<EstimateRow>& rows) {
  os << "state,count,mean,variance\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", r.mean, r.variance);
    os << r.state << ',' << r.count << ',' << buf << '\n';
  }
}

}  // namespace gae
