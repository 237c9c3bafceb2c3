#pragma once

#include <string_view>

#include "json.hpp"

#include "gcq/hypergraph.hpp"
#include "gcq/sigmodel.hpp"

namespace gcq {

using json = nlohmann::json;

/// Parses JSON, rejecting duplicate object keys. Throws ParseError.
json parse_json_strict(std::string_view text);

json relation_to_json(const Relation& rel, const std::vector<std::string>& carrier);
json model_to_json(const RelModel& model);
json hypergraph_to_json(const Hypergraph& g);
Hypergraph hypergraph_from_json(const json& doc);
json morphism_to_json(const HgMorphism& f);

}  // namespace gcq
