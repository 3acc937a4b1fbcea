#include "reptrace/table4.hpp"

#include <cmath>

namespace reptrace::table4 {

const std::vector<Row>& rows() {
    static const std::vector<Row> table = {
        {"B", {0.75, 0.55, 0.40}, {0.95, 0.70, 0.30}, {0.80, 0.5875, 0.375}, 0.640625,
         {0.80, 0.59, 0.38}, 0.64},
        {"C", {0.10, 0.20, 0.15}, {0.40, 0.15, 0.15}, {0.175, 0.1875, 0.15}, 0.174375,
         {0.18, 0.19, 0.15}, 0.17},
        {"D", {0.50, 0.95, 0.10}, {0.60, 0.80, 0.10}, {0.525, 0.9125, 0.10}, 0.575625,
         {0.53, 0.91, 0.10}, 0.58},
        {"E", {0.10, 0.20, 0.40}, {0.90, 1.00, 0.95}, {0.30, 0.40, 0.5375}, 0.3825,
         {0.30, 0.40, 0.54}, 0.38},
    };
    return table;
}

const Row& row(std::string_view provider) {
    for (const auto& r : rows()) {
        if (r.provider == provider) return r;
    }
    throw Error(ErrorCode::UnknownAgent, "no running-example provider '" + std::string(provider) + "'");
}

const std::vector<Term>& terms() {
    static const std::vector<Term> t = {Term("quality"), Term("timeliness"), Term("cost")};
    return t;
}

Preferences preferences() {
    Preferences p;
    const std::array<double, 3> weights = {0.45, 0.35, 0.20};
    for (std::size_t i = 0; i < 3; ++i) p.term_weights.emplace_back(terms()[i], weights[i]);
    p.component_weights = {{ReputationType::Interaction, 0.75}, {ReputationType::Witness, 0.25}};
    return p;
}

Assessment assessment(std::string_view provider) {
    const auto& r = row(provider);
    const auto prefs = preferences();
    std::vector<std::pair<Term, std::vector<ComponentTrust>>> per_term;
    for (std::size_t i = 0; i < 3; ++i) {
        per_term.emplace_back(terms()[i],
                              std::vector<ComponentTrust>{
                                  {ReputationType::Interaction, r.interaction[i], 0.75, 1.0},
                                  {ReputationType::Witness, r.witness[i], 0.25, 1.0}});
    }
    return assemble_assessment(AgentId(std::string(kAssessor)), AgentId(r.provider), std::move(per_term),
                               prefs);
}

explain::ComparisonContext context(std::string_view preferred, std::string_view other) {
    auto p = assessment(preferred);
    auto o = assessment(other);
    return {AgentId(std::string(kAssessor)), p, o, preferences(), explain::Model::Fire,
            explain::FireDiagnostics{p, o}, std::nullopt};
}

io::StoresDocument stores() {
    io::StoresDocument doc;
    doc.preferences = preferences();
    doc.model = explain::Model::Fire;
    doc.fire.importance = doc.preferences.component_weights;
    doc.now = 0;
    const AgentId assessor(std::string{kAssessor});
    const AgentId witness(std::string{kWitness});
    sim::AgentStores a{assessor, RatingStore(std::nullopt, assessor), ObservationStore{}};
    for (const auto& r : rows()) {
        const AgentId provider(r.provider);
        doc.providers.push_back(provider);
        for (std::size_t i = 0; i < 3; ++i) {
            a.ratings.insert(make_rating(assessor, provider, terms()[i], ReputationType::Interaction,
                                         r.interaction[i], NativeRange::unit(), 0));
            a.ratings.insert(make_rating(witness, provider, terms()[i], ReputationType::Witness,
                                         r.witness[i], NativeRange::unit(), 0));
        }
    }
    doc.agents.push_back(std::move(a));
    return doc;
}

double round2(double v) { return std::floor(v * 100.0 + 0.5 + 1e-9) / 100.0; }

}  // namespace reptrace::table4
