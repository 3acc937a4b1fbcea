#pragma once
// Multi-term reputation domain types and the model-independent combination
// math: component trusts -> term trust -> overall trust score.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reptrace/error.hpp"

namespace reptrace {

/// Absolute tolerance used when validating recomputed assessments.
inline constexpr double kAssessmentTolerance = 1e-9;

class AgentId {
public:
    explicit AgentId(std::string id);
    const std::string& str() const noexcept { return id_; }
    auto operator<=>(const AgentId&) const = default;

private:
    std::string id_;
};

class Term {
public:
    explicit Term(std::string name);
    const std::string& name() const noexcept { return name_; }
    auto operator<=>(const Term&) const = default;

private:
    std::string name_;
};

enum class ReputationType : std::uint8_t { Interaction, Witness, RoleBased, Certified };

inline constexpr std::array<ReputationType, 4> kAllReputationTypes = {
    ReputationType::Interaction, ReputationType::Witness, ReputationType::RoleBased,
    ReputationType::Certified};

/// Lower-case identifier used in documents ("interaction", "witness", ...).
std::string_view to_string(ReputationType type);
/// One or two letter symbol (I, W, R, Cr).
std::string_view symbol(ReputationType type);
/// Accepts either the identifier or the symbol. Throws ConfigError.
ReputationType parse_reputation_type(std::string_view text);

/// Native rating scale of a reputation model.
struct NativeRange {
    enum class Kind : std::uint8_t { Interval, Binary };
    Kind kind = Kind::Interval;
    double lo = 0.0;
    double hi = 1.0;

    static NativeRange fire() { return {Kind::Interval, -1.0, 1.0}; }
    static NativeRange travos() { return {Kind::Binary, 0.0, 1.0}; }
    static NativeRange unit() { return {Kind::Interval, 0.0, 1.0}; }

    bool contains(double raw) const;
};

/// Affine map of the native range onto [0,1]. Throws OutOfRange.
double normalize_rating(double raw, const NativeRange& range);
double denormalize_rating(double value, const NativeRange& range);

/// The atom of all evidence: <source, target, term, type, value> plus
/// the round it was recorded in.
struct Rating {
    AgentId source;
    AgentId target;
    Term term;
    ReputationType rep_type = ReputationType::Interaction;
    double value = 0.0;      // normalized to [0,1]
    double raw_value = 0.0;  // model-native scale
    std::uint64_t timestamp = 0;
    std::optional<std::string> interaction_id;
};

Rating make_rating(AgentId source, AgentId target, Term term, ReputationType type, double raw,
                   const NativeRange& range, std::uint64_t timestamp,
                   std::optional<std::string> interaction_id = std::nullopt);

/// Total order used wherever rating lists must be independent of insertion order.
bool rating_less(const Rating& a, const Rating& b);

struct Preferences {
    /// Term weights in declaration order. Declaration order drives explanation order.
    std::vector<std::pair<Term, double>> term_weights;
    std::map<ReputationType, double> component_weights;

    std::vector<Term> terms() const;
    std::optional<double> term_weight(const Term& term) const;
    double component_weight(ReputationType type) const;
    std::map<Term, double> term_weight_map() const;

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

struct ComponentTrust {
    ReputationType rep_type = ReputationType::Interaction;
    std::optional<double> value;  // absent when there is no evidence
    double weight = 0.0;          // effective weight; zero whenever value is absent
    double reliability = 1.0;
};

/// Weighted mean of the present component values. Throws NoEvidence.
double combine_term_trust(std::span<const ComponentTrust> components);

/// Weighted mean of term trusts under the term weights. Throws NoTerms,
/// WeightSumZero, or ConfigError when the two term sets differ.
double overall_trust(const std::map<Term, double>& term_trusts,
                     const std::map<Term, double>& term_weights);

struct TermAssessment {
    Term term;
    std::vector<ComponentTrust> components;
    double term_trust = 0.0;

    const ComponentTrust* component(ReputationType type) const;
};

struct Assessment {
    AgentId assessor;
    AgentId target;
    std::vector<TermAssessment> per_term;  // preference declaration order
    double overall = 0.0;

    const TermAssessment* find(const Term& term) const;
    const TermAssessment& at(const Term& term) const;
};

/// Builds an assessment from per-term component lists: combines each term's
/// components and the resulting term trusts under the preferences.
Assessment assemble_assessment(AgentId assessor, AgentId target,
                               std::vector<std::pair<Term, std::vector<ComponentTrust>>> terms,
                               const Preferences& prefs);

/// Recomputes every term trust and the overall score; throws ConfigError on a
/// mismatch beyond kAssessmentTolerance.
void validate_assessment(const Assessment& assessment, const Preferences& prefs);

}  // namespace reptrace
