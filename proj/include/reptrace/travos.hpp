#pragma once
// TRAVOS backend: beta-distributed trust, confidence, witness accuracy from
// observation history, opinion discounting and evidence combination, plus
// the decomposition of the composite into interaction/witness components.

#include <optional>
#include <span>
#include <vector>

#include "reptrace/core.hpp"
#include "reptrace/store.hpp"

namespace reptrace::travos {

/// Outcome ratings at or above this value count as successes.
inline constexpr double kSuccessThreshold = 0.5;

struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;

    bool operator==(const BetaParams&) const = default;
};

struct TravosConfig {
    double epsilon = 0.05;              // confidence half-width
    double confidence_threshold = 0.2;  // witnesses consulted below this
    int bins = 5;                       // opinion-similarity bins

    void validate() const;
};

struct WitnessOpinion {
    AgentId witness;
    AgentId target;
    Term term;
    BetaParams params;
    double raw_expected = 0.5;
};

WitnessOpinion make_opinion(AgentId witness, AgentId target, Term term, BetaParams params);

/// Regularized incomplete beta I_x(a, b), evaluated by continued fraction.
/// Throws NumericalFailure when the expansion does not converge.
double regularized_incomplete_beta(double x, double a, double b);

/// Probability mass of Beta(p) over [lo, hi], limits clipped to [0,1].
double interval_mass(const BetaParams& p, double lo, double hi);

/// alpha = 1 + #positives, beta = 1 + #negatives. Throws NonBinaryRating.
BetaParams beta_from_ratings(std::span<const Rating> ratings);

/// Same counting after thresholding [0,1] values at kSuccessThreshold.
BetaParams beta_from_outcomes(std::span<const double> values);

double expected_value(const BetaParams& p);
double standard_deviation(const BetaParams& p);

/// Mass of the distribution within [E - epsilon, E + epsilon].
double confidence(const BetaParams& p, double epsilon);

/// Accuracy of a witness from observations already filtered to the bin the
/// new opinion falls in: the mass of the outcome distribution over that bin.
double witness_accuracy(std::span<const ObservationRecord> observations, int bin, int bins);

/// Moves the opinion's mean and spread towards the uniform prior in
/// proportion to (1 - rho), then re-derives (alpha, beta) by moment matching.
/// Throws DegenerateMoments when the result is not a valid beta.
BetaParams discount_opinion(const WitnessOpinion& opinion, double rho);

/// Literal sums of the interaction and discounted witness parameters.
BetaParams combine_evidence(const BetaParams& interaction, std::span<const BetaParams> discounted);

struct DecompositionWeights {
    double interaction = 1.0;
    double witness = 0.0;
};

/// Share of the combined evidence mass contributed by each component.
DecompositionWeights decomposition_weights(const BetaParams& interaction,
                                           std::span<const BetaParams> discounted);

/// Expected value of the pooled discounted witness evidence (no prior);
/// nullopt when there is none.
std::optional<double> pooled_witness_trust(std::span<const BetaParams> discounted);

struct WitnessDiagnostic {
    AgentId witness;
    WitnessOpinion opinion;
    double accuracy = 0.0;
    BetaParams discounted;
    bool clamped = false;  // discount was degenerate and replaced by (1,1)
};

struct TermResult {
    TermAssessment fragment;
    BetaParams interaction;
    BetaParams combined;
    double interaction_confidence = 0.0;
    bool low_confidence = false;
    bool witnesses_consulted = false;
    /// Witness trust for explanations; computed even when witnesses were not
    /// consulted for the score.
    std::optional<double> witness_trust;
    std::vector<WitnessDiagnostic> witnesses;
};

/// Assesses one term. Interaction evidence matches (assessor, target, t, I);
/// witness opinions are built per source from (*, target, t, W).
TermResult assess_term(const RatingStore& ratings, const ObservationStore& observations,
                       const AgentId& assessor, const AgentId& target, const Term& term,
                       const TravosConfig& config);

struct TravosAssessment {
    Assessment assessment;
    std::vector<TermResult> terms;  // preference declaration order
};

TravosAssessment assess_travos(const RatingStore& ratings, const ObservationStore& observations,
                               const AgentId& assessor, const AgentId& target,
                               const Preferences& prefs, const TravosConfig& config);

}  // namespace reptrace::travos
