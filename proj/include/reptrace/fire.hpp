#pragma once
// FIRE backend: recency-weighted component trusts, role-based trust from
// rules, and the composite term trust. Every weighted aggregation has a
// uniform-weight twin used by the recency explanation arguments.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reptrace/core.hpp"
#include "reptrace/store.hpp"

namespace reptrace::fire {

inline constexpr double kDefaultLambda = 5.0;
inline constexpr std::string_view kConstantOne = "constant_one";

struct FireConfig {
    double lambda = kDefaultLambda;
    std::map<ReputationType, double> importance;
    /// Name of a registered reliability function; "constant_one" by default.
    std::string reliability = std::string(kConstantOne);
    /// Native scale of role-rule expected values.
    NativeRange rule_range = NativeRange::fire();

    double importance_of(ReputationType type) const;
    void validate() const;
};

/// Reliability rho_K of a component given the ratings that produced it.
using ReliabilityFn = std::function<double(std::span<const Rating>, ReputationType)>;

/// Registers (or replaces) a named reliability function.
void register_reliability(const std::string& name, ReliabilityFn fn);
bool has_reliability(const std::string& name);

/// e^(-delta_tau / lambda).
double recency_weight(double delta_tau, double lambda);

/// Recency-weighted mean of ratings of one interaction-like component
/// (Interaction, Witness or Certified). Empty input gives an absent value.
ComponentTrust component_trust(std::span<const Rating> ratings, ReputationType type,
                               const FireConfig& config, std::uint64_t now);

/// Role-based trust: rule values weighted by their likelihood e.
ComponentTrust role_trust(std::span<const RoleRule> rules, const FireConfig& config);

/// Same aggregation with every rating weighted 1/|R|.
ComponentTrust component_trust_uniform(std::span<const Rating> ratings, ReputationType type,
                                       const FireConfig& config);
ComponentTrust role_trust_uniform(std::span<const RoleRule> rules, const FireConfig& config);

/// Composite term trust with effective weights importance * reliability.
double term_trust_fire(std::span<const ComponentTrust> components, const FireConfig& config);

struct FireAssessment {
    Assessment weighted;
    Assessment uniform;
};

/// Assessor's view of `target` over every preference term. Interaction
/// evidence matches (assessor, target, t, I); witness and certified evidence
/// match (*, target, t, W|Cr). Throws NoEvidence when a term has no evidence.
FireAssessment assess_fire(const RatingStore& ratings, const RoleRuleStore* roles,
                           const AgentId& assessor, const AgentId& target,
                           const Preferences& prefs, const FireConfig& config, std::uint64_t now);

}  // namespace reptrace::fire
