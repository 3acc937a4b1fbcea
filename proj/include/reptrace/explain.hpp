#pragma once
// Argument generation: why does provider b outrank b' for assessor a?
//
// The explanation is built top-down. Decisive terms come first (domination
// or the decisive-criteria pattern), then model-specific arguments about the
// score as a whole, then, for every decisive pro, the decisive reputation
// types (weight permutations that would invert the term trust) and the
// model-specific term and trust-value arguments.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "reptrace/core.hpp"

namespace reptrace::explain {

enum class Model : std::uint8_t { Fire, Travos };

std::string_view to_string(Model model);
Model parse_model(std::string_view text);

/// Uniform-weight baseline assessments for the FIRE recency arguments.
struct FireDiagnostics {
    Assessment preferred_uniform;
    Assessment other_uniform;
};

struct TravosTermDiagnostics {
    Term term;
    double preferred_confidence = 0.0;
    double other_confidence = 0.0;
    bool preferred_low = false;
    bool other_low = false;
    std::optional<double> preferred_witness;
    std::optional<double> other_witness;
};

struct TravosDiagnostics {
    std::vector<TravosTermDiagnostics> terms;

    const TravosTermDiagnostics* find(const Term& term) const;
};

struct ComparisonContext {
    AgentId assessor;
    Assessment preferred;
    Assessment other;
    Preferences preferences;
    Model model = Model::Fire;
    std::optional<FireDiagnostics> fire;
    std::optional<TravosDiagnostics> travos;
};

struct DecisiveDominance {
    std::vector<Term> pros;
    double reference = 0.0;  // reference weighted value difference
};

struct DecisiveTradeoff {
    std::vector<Term> pros;
    std::vector<Term> cons;
};

/// One transposition of component weights, oriented by the preferred
/// provider's weights: the first type is the less important one.
struct TypeSwap {
    ReputationType less_important;
    ReputationType more_important;

    bool operator==(const TypeSwap&) const = default;
};

struct TypePermutation {
    Term term;
    std::vector<TypeSwap> swaps;  // applied in order
    double preferred_trust = 0.0;  // term trusts after applying the swaps
    double other_trust = 0.0;
};

struct FireRecencyGlobal {};

struct FireRecencyLocal {
    Term term;
    ReputationType rep_type;
};

struct TravosLowConfidence {
    Term term;
};

using Argument = std::variant<DecisiveDominance, DecisiveTradeoff, TypePermutation,
                              FireRecencyGlobal, FireRecencyLocal, TravosLowConfidence>;

/// Stable identifier of an argument's kind ("decisive_dominance", ...).
std::string_view kind_name(const Argument& argument);

struct Explanation {
    AgentId assessor;
    AgentId preferred;
    AgentId other;
    Model model = Model::Fire;
    std::vector<Argument> arguments;
};

enum class ProsOrder : std::uint8_t {
    Descending,  // largest weighted difference first
    Ascending,
};

struct ExplainOptions {
    ProsOrder pros_order = ProsOrder::Descending;
};

struct TermDifference {
    Term term;
    double delta = 0.0;     // T(a,b,t) - T(a,b',t)
    double weighted = 0.0;  // normalized term weight * |delta|
};

/// Differences in preference declaration order.
std::vector<TermDifference> term_differences(const ComparisonContext& ctx);

bool dominates(const ComparisonContext& ctx);

DecisiveDominance decisive_terms_dominance(const ComparisonContext& ctx,
                                           const ExplainOptions& options = {});

/// Indices into the pro / con lists handed to select_tradeoff.
struct SubsetChoice {
    std::vector<std::size_t> pros;
    std::vector<std::size_t> cons;

    bool operator==(const SubsetChoice&) const = default;
};

/// Largest term count searched exhaustively on each side.
inline constexpr std::size_t kExhaustiveLimit = 12;

/// Chooses P* from the pros and C* from the cons such that the weighted
/// differences in P* outweigh the cons left outside C*. Preference order:
/// C* empty before C* non-empty, then fewest pros, then fewest cons, then the
/// larger pro sum, the larger con sum and finally declaration order. Inputs
/// are weighted differences in declaration order. Throws Infeasible.
SubsetChoice select_tradeoff(std::span<const double> pros, std::span<const double> cons);

DecisiveTradeoff decisive_terms_tradeoff(const ComparisonContext& ctx,
                                         const ExplainOptions& options = {});

/// Term trust after swapping component weights in order.
double permuted_term_trust(std::span<const ComponentTrust> components,
                           std::span<const TypeSwap> swaps);

/// Searches every permutation of the weights of the reputation types present
/// for both providers and returns the cheapest one that strictly reverses
/// the term-trust order (fewest transpositions, then the largest swapped
/// weight gap). nullopt when none does.
std::optional<TypePermutation> find_inverting_permutation(
    const Term& term, std::span<const ComponentTrust> preferred,
    std::span<const ComponentTrust> other);

/// nullopt when the preferred provider dominates at component level.
std::optional<TypePermutation> invert_permutation(const ComparisonContext& ctx, const Term& term);

std::optional<FireRecencyGlobal> fire_recency_global(const ComparisonContext& ctx);
std::optional<FireRecencyLocal> fire_recency_local(const ComparisonContext& ctx, const Term& term,
                                                   ReputationType type);
std::optional<TravosLowConfidence> travos_low_confidence(const ComparisonContext& ctx,
                                                         const Term& term);

/// Throws NotPreferred when other outranks preferred and AmbiguousOrder when
/// the scores tie within kAssessmentTolerance.
Explanation explain(const ComparisonContext& ctx, const ExplainOptions& options = {});

}  // namespace reptrace::explain
