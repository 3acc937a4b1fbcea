#include "reptrace/pipeline.hpp"

#include <algorithm>

namespace reptrace::pipeline {

const sim::AgentStores& assessor_stores(const io::StoresDocument& doc, const AgentId& assessor) {
    const auto* stores = doc.find(assessor);
    if (!stores) throw Error(ErrorCode::UnknownAgent, "unknown assessor '" + assessor.str() + "'");
    return *stores;
}

ProviderAssessment assess_provider(const io::StoresDocument& doc, explain::Model model,
                                   const AgentId& assessor, const AgentId& target) {
    const auto& stores = assessor_stores(doc, assessor);
    if (std::find(doc.providers.begin(), doc.providers.end(), target) == doc.providers.end()) {
        throw Error(ErrorCode::UnknownAgent, "unknown provider '" + target.str() + "'");
    }
    ProviderAssessment out{Assessment{assessor, target, {}, 0.0}, std::nullopt, std::nullopt};
    if (model == explain::Model::Fire) {
        out.fire = fire::assess_fire(stores.ratings, &doc.roles, assessor, target, doc.preferences,
                                     doc.fire, doc.now);
        out.assessment = out.fire->weighted;
    } else {
        out.travos = travos::assess_travos(stores.ratings, stores.observations, assessor, target,
                                           doc.preferences, doc.travos);
        out.assessment = out.travos->assessment;
    }
    return out;
}

Ranking rank_providers(const io::StoresDocument& doc, explain::Model model, const AgentId& assessor) {
    assessor_stores(doc, assessor);
    Ranking ranking{assessor, model, {}, {}};
    for (const auto& provider : doc.providers) {
        if (provider == assessor) continue;
        try {
            ranking.ranked.push_back(assess_provider(doc, model, assessor, provider));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoEvidence) throw;
            ranking.unrated.push_back({provider, e.message()});
        }
    }
    std::stable_sort(ranking.ranked.begin(), ranking.ranked.end(),
                     [](const ProviderAssessment& a, const ProviderAssessment& b) {
                         if (a.assessment.overall != b.assessment.overall) {
                             return a.assessment.overall > b.assessment.overall;
                         }
                         return a.assessment.target < b.assessment.target;
                     });
    return ranking;
}

io::json ranking_to_json(const Ranking& ranking) {
    io::json entries = io::json::array();
    for (const auto& p : ranking.ranked) {
        io::json entry = io::assessment_to_json(p.assessment);
        entry.erase("assessor");
        if (p.travos) {
            for (std::size_t i = 0; i < p.travos->terms.size(); ++i) {
                const auto& r = p.travos->terms[i];
                auto& t = entry["terms"][i];
                t["confidence"] = r.interaction_confidence;
                t["low_confidence"] = r.low_confidence;
                t["witnesses_consulted"] = r.witnesses_consulted;
            }
        }
        entries.push_back(std::move(entry));
    }
    io::json unrated = io::json::array();
    for (const auto& u : ranking.unrated) unrated.push_back({{"target", u.target.str()}, {"reason", u.reason}});
    return {{"schema", io::kRankingSchema},
            {"model", explain::to_string(ranking.model)},
            {"assessor", ranking.assessor.str()},
            {"ranking", entries},
            {"unrated", unrated}};
}

namespace {

explain::TravosDiagnostics travos_diagnostics(const travos::TravosAssessment& preferred,
                                              const travos::TravosAssessment& other) {
    explain::TravosDiagnostics diag;
    for (std::size_t i = 0; i < preferred.terms.size(); ++i) {
        const auto& p = preferred.terms[i];
        const auto& o = other.terms[i];
        diag.terms.push_back({p.fragment.term, p.interaction_confidence, o.interaction_confidence,
                              p.low_confidence, o.low_confidence, p.witness_trust, o.witness_trust});
    }
    return diag;
}

}  // namespace

explain::ComparisonContext build_context(const io::StoresDocument& doc, explain::Model model,
                                         const AgentId& assessor, const AgentId& preferred,
                                         const AgentId& other) {
    const auto p = assess_provider(doc, model, assessor, preferred);
    const auto o = assess_provider(doc, model, assessor, other);
    explain::ComparisonContext ctx{assessor, p.assessment, o.assessment, doc.preferences, model,
                                   std::nullopt, std::nullopt};
    if (model == explain::Model::Fire) {
        ctx.fire = explain::FireDiagnostics{p.fire->uniform, o.fire->uniform};
    } else {
        ctx.travos = travos_diagnostics(*p.travos, *o.travos);
    }
    return ctx;
}

}  // namespace reptrace::pipeline
