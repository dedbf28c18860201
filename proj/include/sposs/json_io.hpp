#pragma once

#include <string>

#include <json.hpp>

#include "sposs/matroid.hpp"
#include "sposs/objective.hpp"
#include "sposs/set_system.hpp"
#include "sposs/stochastic.hpp"

namespace sposs {

/// Throws ParseError on malformed text.
nlohmann::json parse_json_text(const std::string& text);
/// Throws IoError if the file cannot be read, ParseError if it is not JSON.
nlohmann::json load_json_file(const std::string& path);

MatroidOracle matroid_from_json(const nlohmann::json& j);
/// Base family only; throws KindError for views.
nlohmann::json matroid_to_json(const MatroidOracle& m);

SetSystem system_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const SetSystem& sys);

Objective objective_from_json(const nlohmann::json& j);
nlohmann::json objective_to_json(const Objective& obj);

/// Either {"name", "p", "seed", "system", "objective"} or a generator
/// descriptor {"generator": "rank1" | "blocks" | "equal_partition", ...}.
SppInstance instance_from_json(const nlohmann::json& j);
/// Always the explicit form.
nlohmann::json instance_to_json(const SppInstance& inst);

}  // namespace sposs
