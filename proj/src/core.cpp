#include "reptrace/core.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace reptrace {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NoEvidence: return "NoEvidence";
        case ErrorCode::NoTerms: return "NoTerms";
        case ErrorCode::WeightSumZero: return "WeightSumZero";
        case ErrorCode::BadBin: return "BadBin";
        case ErrorCode::NonBinaryRating: return "NonBinaryRating";
        case ErrorCode::NumericalFailure: return "NumericalFailure";
        case ErrorCode::DegenerateMoments: return "DegenerateMoments";
        case ErrorCode::NotDominant: return "NotDominant";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::MissingDiagnostics: return "MissingDiagnostics";
        case ErrorCode::NotPreferred: return "NotPreferred";
        case ErrorCode::AmbiguousOrder: return "AmbiguousOrder";
        case ErrorCode::UnknownAgent: return "UnknownAgent";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

AgentId::AgentId(std::string id) : id_(std::move(id)) {
    if (id_.empty()) throw Error(ErrorCode::ConfigError, "agent id must be non-empty");
}

Term::Term(std::string name) : name_(std::move(name)) {
    if (name_.empty()) throw Error(ErrorCode::ConfigError, "term name must be non-empty");
}

std::string_view to_string(ReputationType type) {
    switch (type) {
        case ReputationType::Interaction: return "interaction";
        case ReputationType::Witness: return "witness";
        case ReputationType::RoleBased: return "role_based";
        case ReputationType::Certified: return "certified";
    }
    return "interaction";
}

std::string_view symbol(ReputationType type) {
    switch (type) {
        case ReputationType::Interaction: return "I";
        case ReputationType::Witness: return "W";
        case ReputationType::RoleBased: return "R";
        case ReputationType::Certified: return "Cr";
    }
    return "I";
}

ReputationType parse_reputation_type(std::string_view text) {
    for (auto type : kAllReputationTypes) {
        if (text == to_string(type) || text == symbol(type)) return type;
    }
    throw Error(ErrorCode::ConfigError, "unknown reputation type '" + std::string(text) + "'");
}

bool NativeRange::contains(double raw) const {
    if (!std::isfinite(raw)) return false;
    if (kind == Kind::Binary) return raw == lo || raw == hi;
    return raw >= lo && raw <= hi;
}

double normalize_rating(double raw, const NativeRange& range) {
    if (!range.contains(raw)) {
        throw Error(ErrorCode::OutOfRange, "rating " + std::to_string(raw) + " outside native range");
    }
    if (range.kind == NativeRange::Kind::Binary) return raw == range.hi ? 1.0 : 0.0;
    return (raw - range.lo) / (range.hi - range.lo);
}

double denormalize_rating(double value, const NativeRange& range) {
    if (range.kind == NativeRange::Kind::Binary) return value >= 0.5 ? range.hi : range.lo;
    return range.lo + value * (range.hi - range.lo);
}

Rating make_rating(AgentId source, AgentId target, Term term, ReputationType type, double raw,
                   const NativeRange& range, std::uint64_t timestamp,
                   std::optional<std::string> interaction_id) {
    const double value = normalize_rating(raw, range);
    return Rating{std::move(source), std::move(target), std::move(term), type, value,
                  raw,               timestamp,         std::move(interaction_id)};
}

bool rating_less(const Rating& a, const Rating& b) {
    return std::tie(a.timestamp, a.source, a.target, a.term, a.rep_type, a.value, a.raw_value,
                    a.interaction_id) < std::tie(b.timestamp, b.source, b.target, b.term,
                                                 b.rep_type, b.value, b.raw_value,
                                                 b.interaction_id);
}

std::vector<Term> Preferences::terms() const {
    std::vector<Term> out;
    out.reserve(term_weights.size());
    for (const auto& [term, weight] : term_weights) out.push_back(term);
    return out;
}

std::optional<double> Preferences::term_weight(const Term& term) const {
    for (const auto& [t, w] : term_weights) {
        if (t == term) return w;
    }
    return std::nullopt;
}

double Preferences::component_weight(ReputationType type) const {
    auto it = component_weights.find(type);
    return it == component_weights.end() ? 0.0 : it->second;
}

std::map<Term, double> Preferences::term_weight_map() const {
    return {term_weights.begin(), term_weights.end()};
}

void Preferences::validate() const {
    if (term_weights.empty()) throw Error(ErrorCode::NoTerms, "preferences declare no terms");
    bool any_term = false;
    for (std::size_t i = 0; i < term_weights.size(); ++i) {
        const auto& [term, w] = term_weights[i];
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error(ErrorCode::ConfigError, "term weight for '" + term.name() + "' must be >= 0");
        }
        any_term = any_term || w > 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            if (term_weights[j].first == term) {
                throw Error(ErrorCode::ConfigError, "duplicate term '" + term.name() + "'");
            }
        }
    }
    if (!any_term) throw Error(ErrorCode::WeightSumZero, "no positive term weight");
    bool any_component = false;
    for (const auto& [type, w] : component_weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error(ErrorCode::ConfigError,
                        "component weight for '" + std::string(to_string(type)) + "' must be >= 0");
        }
        any_component = any_component || w > 0.0;
    }
    if (!any_component) throw Error(ErrorCode::ConfigError, "no positive component weight");
}

double combine_term_trust(std::span<const ComponentTrust> components) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& c : components) {
        if (!c.value || c.weight <= 0.0) continue;
        num += c.weight * *c.value;
        den += c.weight;
    }
    if (den <= 0.0) throw Error(ErrorCode::NoEvidence, "no component carries weight and a value");
    return num / den;
}

double overall_trust(const std::map<Term, double>& term_trusts,
                     const std::map<Term, double>& term_weights) {
    if (term_trusts.empty()) throw Error(ErrorCode::NoTerms, "no term trusts");
    if (term_trusts.size() != term_weights.size()) {
        throw Error(ErrorCode::ConfigError, "term trusts and term weights cover different terms");
    }
    double num = 0.0;
    double den = 0.0;
    for (const auto& [term, trust] : term_trusts) {
        auto it = term_weights.find(term);
        if (it == term_weights.end()) {
            throw Error(ErrorCode::ConfigError, "no weight for term '" + term.name() + "'");
        }
        num += it->second * trust;
        den += it->second;
    }
    if (den <= 0.0) throw Error(ErrorCode::WeightSumZero, "term weights sum to zero");
    return num / den;
}

const ComponentTrust* TermAssessment::component(ReputationType type) const {
    for (const auto& c : components) {
        if (c.rep_type == type) return &c;
    }
    return nullptr;
}

const TermAssessment* Assessment::find(const Term& term) const {
    for (const auto& t : per_term) {
        if (t.term == term) return &t;
    }
    return nullptr;
}

const TermAssessment& Assessment::at(const Term& term) const {
    if (const auto* t = find(term)) return *t;
    throw Error(ErrorCode::ConfigError, "assessment has no term '" + term.name() + "'");
}

Assessment assemble_assessment(AgentId assessor, AgentId target,
                               std::vector<std::pair<Term, std::vector<ComponentTrust>>> terms,
                               const Preferences& prefs) {
    Assessment out{std::move(assessor), std::move(target), {}, 0.0};
    std::map<Term, double> trusts;
    for (auto& [term, components] : terms) {
        for (auto& c : components) {
            if (!c.value) c.weight = 0.0;
        }
        const double trust = combine_term_trust(components);
        trusts.emplace(term, trust);
        out.per_term.push_back(TermAssessment{term, std::move(components), trust});
    }
    out.overall = overall_trust(trusts, prefs.term_weight_map());
    return out;
}

void validate_assessment(const Assessment& assessment, const Preferences& prefs) {
    std::map<Term, double> trusts;
    for (const auto& t : assessment.per_term) {
        for (const auto& c : t.components) {
            if (!c.value && c.weight != 0.0) {
                throw Error(ErrorCode::ConfigError, "absent component with non-zero weight");
            }
            if (c.value && (*c.value < 0.0 || *c.value > 1.0)) {
                throw Error(ErrorCode::ConfigError, "component value outside [0,1]");
            }
        }
        const double recomputed = combine_term_trust(t.components);
        if (std::abs(recomputed - t.term_trust) > kAssessmentTolerance) {
            throw Error(ErrorCode::ConfigError,
                        "term trust for '" + t.term.name() + "' does not match its components");
        }
        trusts.emplace(t.term, t.term_trust);
    }
    const double overall = overall_trust(trusts, prefs.term_weight_map());
    if (std::abs(overall - assessment.overall) > kAssessmentTolerance) {
        throw Error(ErrorCode::ConfigError, "overall score does not match term trusts");
    }
}

}  // namespace reptrace
