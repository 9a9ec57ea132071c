#pragma once

#include <string>
#include <utility>

#include "json.hpp"
#include "menumech/buyer.hpp"
#include "menumech/core.hpp"
#include "menumech/direct.hpp"

namespace menumech {

// 17 significant digits, enough to round-trip any double through text.
std::string fmt17(double x);

// {"types": [...], "gamma": [...], "alloc": [[...]], "pay": [[...]]},
// 2-D arrays indexed [type][round].
nlohmann::json direct_to_json(const DirectMechanism& mech, const DiscountSequence& seq);
std::pair<DirectMechanism, DiscountSequence> direct_from_json(const nlohmann::json& j);

// Nested nodes: {"menu": [[allocation, payment], ...],
//                "children": {"<allocation>": <node>, ...}}.
nlohmann::json tree_to_json(const MechanismTree& tree);
MechanismTree tree_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace menumech
