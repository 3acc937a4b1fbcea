#pragma once
// Glue between serialized stores and the models: per-provider assessment,
// ranking, and the comparison context explanations are generated from.

#include <optional>
#include <string>
#include <vector>

#include "reptrace/explain.hpp"
#include "reptrace/fire.hpp"
#include "reptrace/io.hpp"
#include "reptrace/travos.hpp"

namespace reptrace::pipeline {

struct ProviderAssessment {
    Assessment assessment;
    std::optional<fire::FireAssessment> fire;
    std::optional<travos::TravosAssessment> travos;
};

/// Throws UnknownAgent when the assessor has no stores.
const sim::AgentStores& assessor_stores(const io::StoresDocument& doc, const AgentId& assessor);

ProviderAssessment assess_provider(const io::StoresDocument& doc, explain::Model model,
                                   const AgentId& assessor, const AgentId& target);

struct Unrated {
    AgentId target;
    std::string reason;
};

struct Ranking {
    AgentId assessor;
    explain::Model model = explain::Model::Fire;
    std::vector<ProviderAssessment> ranked;  // overall descending, ties by id
    std::vector<Unrated> unrated;            // providers lacking evidence
};

Ranking rank_providers(const io::StoresDocument& doc, explain::Model model, const AgentId& assessor);

io::json ranking_to_json(const Ranking& ranking);

/// Context with the model diagnostics the explanation arguments need.
explain::ComparisonContext build_context(const io::StoresDocument& doc, explain::Model model,
                                         const AgentId& assessor, const AgentId& preferred,
                                         const AgentId& other);

}  // namespace reptrace::pipeline
