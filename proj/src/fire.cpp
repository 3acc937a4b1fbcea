#include "reptrace/fire.hpp"

#include <cmath>
#include <mutex>

namespace reptrace::fire {

namespace {

struct Registry {
    std::mutex mutex;
    std::map<std::string, ReliabilityFn, std::less<>> functions;

    Registry() {
        functions.emplace(std::string(kConstantOne),
                          [](std::span<const Rating>, ReputationType) { return 1.0; });
    }
};

Registry& registry() {
    static Registry r;
    return r;
}

double reliability_of(const FireConfig& config, std::span<const Rating> ratings,
                      ReputationType type) {
    ReliabilityFn fn;
    {
        auto& reg = registry();
        std::lock_guard lock(reg.mutex);
        auto it = reg.functions.find(config.reliability);
        if (it == reg.functions.end()) {
            throw Error(ErrorCode::ConfigError,
                        "unknown reliability function '" + config.reliability + "'");
        }
        fn = it->second;
    }
    const double rho = fn(ratings, type);
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw Error(ErrorCode::ConfigError, "reliability must lie in [0,1]");
    }
    return rho;
}

ComponentTrust finish(ReputationType type, std::optional<double> value, double reliability,
                      const FireConfig& config) {
    ComponentTrust c{type, value, 0.0, reliability};
    if (value) c.weight = config.importance_of(type) * reliability;
    return c;
}

void require_interaction_like(ReputationType type) {
    if (type == ReputationType::RoleBased) {
        throw Error(ErrorCode::ConfigError, "role-based trust is computed from rules, not ratings");
    }
}

}  // namespace

double FireConfig::importance_of(ReputationType type) const {
    auto it = importance.find(type);
    return it == importance.end() ? 0.0 : it->second;
}

void FireConfig::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::ConfigError, "lambda must be positive");
    }
    bool any = false;
    for (const auto& [type, w] : importance) {
        if (!(w >= 0.0)) throw Error(ErrorCode::ConfigError, "importance weights must be >= 0");
        any = any || w > 0.0;
    }
    if (!any) throw Error(ErrorCode::ConfigError, "no positive importance weight");
    if (!has_reliability(reliability)) {
        throw Error(ErrorCode::ConfigError, "unknown reliability function '" + reliability + "'");
    }
}

void register_reliability(const std::string& name, ReliabilityFn fn) {
    auto& reg = registry();
    std::lock_guard lock(reg.mutex);
    reg.functions[name] = std::move(fn);
}

bool has_reliability(const std::string& name) {
    auto& reg = registry();
    std::lock_guard lock(reg.mutex);
    return reg.functions.contains(name);
}

double recency_weight(double delta_tau, double lambda) {
    if (delta_tau < 0.0 || !(lambda > 0.0)) {
        throw Error(ErrorCode::ConfigError, "recency weight needs delta_tau >= 0 and lambda > 0");
    }
    return std::exp(-delta_tau / lambda);
}

ComponentTrust component_trust(std::span<const Rating> ratings, ReputationType type,
                               const FireConfig& config, std::uint64_t now) {
    require_interaction_like(type);
    if (ratings.empty()) return finish(type, std::nullopt, 1.0, config);
    double num = 0.0;
    double den = 0.0;
    for (const auto& r : ratings) {
        const double age = r.timestamp > now ? 0.0 : static_cast<double>(now - r.timestamp);
        const double w = recency_weight(age, config.lambda);
        num += w * r.value;
        den += w;
    }
    return finish(type, num / den, reliability_of(config, ratings, type), config);
}

ComponentTrust component_trust_uniform(std::span<const Rating> ratings, ReputationType type,
                                       const FireConfig& config) {
    require_interaction_like(type);
    if (ratings.empty()) return finish(type, std::nullopt, 1.0, config);
    double sum = 0.0;
    for (const auto& r : ratings) sum += r.value;
    return finish(type, sum / static_cast<double>(ratings.size()),
                  reliability_of(config, ratings, type), config);
}

ComponentTrust role_trust(std::span<const RoleRule> rules, const FireConfig& config) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& rule : rules) {
        num += rule.likelihood * normalize_rating(rule.expected_value, config.rule_range);
        den += rule.likelihood;
    }
    if (den <= 0.0) return finish(ReputationType::RoleBased, std::nullopt, 1.0, config);
    return finish(ReputationType::RoleBased, num / den,
                  reliability_of(config, {}, ReputationType::RoleBased), config);
}

ComponentTrust role_trust_uniform(std::span<const RoleRule> rules, const FireConfig& config) {
    if (rules.empty()) return finish(ReputationType::RoleBased, std::nullopt, 1.0, config);
    double sum = 0.0;
    for (const auto& rule : rules) sum += normalize_rating(rule.expected_value, config.rule_range);
    return finish(ReputationType::RoleBased, sum / static_cast<double>(rules.size()),
                  reliability_of(config, {}, ReputationType::RoleBased), config);
}

double term_trust_fire(std::span<const ComponentTrust> components, const FireConfig& config) {
    std::vector<ComponentTrust> effective(components.begin(), components.end());
    for (auto& c : effective) {
        c.weight = c.value ? config.importance_of(c.rep_type) * c.reliability : 0.0;
    }
    return combine_term_trust(effective);
}

FireAssessment assess_fire(const RatingStore& ratings, const RoleRuleStore* roles,
                           const AgentId& assessor, const AgentId& target,
                           const Preferences& prefs, const FireConfig& config, std::uint64_t now) {
    config.validate();
    std::vector<std::pair<Term, std::vector<ComponentTrust>>> weighted;
    std::vector<std::pair<Term, std::vector<ComponentTrust>>> uniform;
    for (const auto& term : prefs.terms()) {
        std::vector<ComponentTrust> w;
        std::vector<ComponentTrust> u;
        for (auto type : kAllReputationTypes) {
            if (config.importance_of(type) <= 0.0) continue;
            if (type == ReputationType::RoleBased) {
                const auto rules = roles ? roles->matching(assessor, target, term)
                                         : std::vector<RoleRule>{};
                w.push_back(role_trust(rules, config));
                u.push_back(role_trust_uniform(rules, config));
                continue;
            }
            RatingPattern pattern{std::nullopt, target, term, type, std::nullopt};
            if (type == ReputationType::Interaction) pattern.source = assessor;
            const auto matched = ratings.query(pattern);
            w.push_back(component_trust(matched, type, config, now));
            u.push_back(component_trust_uniform(matched, type, config));
        }
        weighted.emplace_back(term, std::move(w));
        uniform.emplace_back(term, std::move(u));
    }
    return FireAssessment{assemble_assessment(assessor, target, std::move(weighted), prefs),
                          assemble_assessment(assessor, target, std::move(uniform), prefs)};
}

}  // namespace reptrace::fire
