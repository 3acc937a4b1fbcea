#pragma once
// JSON documents: scenarios, serialized stores, rankings and explanations.
// Every document carries a versioned "schema" field; the JSON Schema files
// under schemas/ describe the same layouts.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reptrace/core.hpp"
#include "reptrace/explain.hpp"
#include "reptrace/fire.hpp"
#include "reptrace/simulate.hpp"
#include "reptrace/store.hpp"
#include "reptrace/travos.hpp"

namespace reptrace::io {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kScenarioSchema = "reptrace.scenario/1";
inline constexpr std::string_view kStoresSchema = "reptrace.stores/1";
inline constexpr std::string_view kRankingSchema = "reptrace.ranking/1";
inline constexpr std::string_view kExplanationSchema = "reptrace.explanation/1";

/// Everything an assessor needs: preferences, model configuration and the
/// per-agent rating and observation stores.
struct StoresDocument {
    Preferences preferences;
    explain::Model model = explain::Model::Fire;
    fire::FireConfig fire;
    std::optional<std::size_t> history_cap;
    travos::TravosConfig travos;
    std::uint64_t now = 0;
    std::vector<AgentId> providers;
    std::vector<sim::AgentStores> agents;
    RoleRuleStore roles;

    const sim::AgentStores* find(const AgentId& agent) const;
};

/// Parses text; malformed JSON becomes a SchemaError.
json parse_json(const std::string& text);

/// Throws SchemaError naming the offending path.
sim::Scenario scenario_from_json(const json& doc);
json scenario_to_json(const sim::Scenario& scenario);

json rating_to_json(const Rating& r);
Rating rating_from_json(const json& j, const std::string& path = "rating");

StoresDocument make_stores_document(const sim::Scenario& scenario, sim::SimulationResult result);
json stores_to_json(const StoresDocument& doc);
StoresDocument stores_from_json(const json& doc);

json assessment_to_json(const Assessment& assessment);

json explanation_to_json(const explain::Explanation& explanation);
explain::Explanation explanation_from_json(const json& doc);

}  // namespace reptrace::io
