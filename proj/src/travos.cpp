#include "reptrace/travos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace reptrace::travos {

namespace {

constexpr double kUniformSigma = 0.28867513459481287;  // sqrt(1/12)
constexpr int kMaxIterations = 20000;
constexpr double kFpMin = 1e-300;
constexpr double kCfTolerance = 1e-15;

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kCfTolerance) return h;
    }
    throw Error(ErrorCode::NumericalFailure, "incomplete beta continued fraction did not converge");
}

void require_valid(const BetaParams& p) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0) || !std::isfinite(p.alpha) ||
        !std::isfinite(p.beta)) {
        throw Error(ErrorCode::ConfigError, "beta parameters must be positive and finite");
    }
}

bool is_success(double value) { return value >= kSuccessThreshold; }

}  // namespace

void TravosConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw Error(ErrorCode::ConfigError, "epsilon must lie in (0, 0.5)");
    }
    if (!(confidence_threshold > 0.0 && confidence_threshold < 1.0)) {
        throw Error(ErrorCode::ConfigError, "confidence threshold must lie in (0, 1)");
    }
    if (bins < 1) throw Error(ErrorCode::ConfigError, "bins must be positive");
}

WitnessOpinion make_opinion(AgentId witness, AgentId target, Term term, BetaParams params) {
    const double e = expected_value(params);
    return WitnessOpinion{std::move(witness), std::move(target), std::move(term), params, e};
}

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw Error(ErrorCode::ConfigError, "incomplete beta needs positive shape parameters");
    }
    if (std::isnan(x)) throw Error(ErrorCode::NumericalFailure, "incomplete beta at NaN");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front) * beta_continued_fraction(x, a, b) / a;
    }
    return 1.0 - std::exp(log_front) * beta_continued_fraction(1.0 - x, b, a) / b;
}

double interval_mass(const BetaParams& p, double lo, double hi) {
    require_valid(p);
    lo = std::clamp(lo, 0.0, 1.0);
    hi = std::clamp(hi, 0.0, 1.0);
    if (hi <= lo) return 0.0;
    const double mass = regularized_incomplete_beta(hi, p.alpha, p.beta) -
                        regularized_incomplete_beta(lo, p.alpha, p.beta);
    return std::clamp(mass, 0.0, 1.0);
}

BetaParams beta_from_ratings(std::span<const Rating> ratings) {
    BetaParams p;
    for (const auto& r : ratings) {
        if (r.value == 1.0) {
            p.alpha += 1.0;
        } else if (r.value == 0.0) {
            p.beta += 1.0;
        } else {
            throw Error(ErrorCode::NonBinaryRating,
                        "rating value " + std::to_string(r.value) + " is not binary");
        }
    }
    return p;
}

BetaParams beta_from_outcomes(std::span<const double> values) {
    BetaParams p;
    for (double v : values) (is_success(v) ? p.alpha : p.beta) += 1.0;
    return p;
}

double expected_value(const BetaParams& p) {
    require_valid(p);
    return p.alpha / (p.alpha + p.beta);
}

double standard_deviation(const BetaParams& p) {
    require_valid(p);
    const double n = p.alpha + p.beta;
    return std::sqrt(p.alpha * p.beta / (n * n * (n + 1.0)));
}

double confidence(const BetaParams& p, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw Error(ErrorCode::ConfigError, "epsilon must lie in (0, 0.5)");
    }
    const double e = expected_value(p);
    return interval_mass(p, e - epsilon, e + epsilon);
}

double witness_accuracy(std::span<const ObservationRecord> observations, int bin, int bins) {
    if (bins < 1 || bin < 1 || bin > bins) {
        throw Error(ErrorCode::BadBin, "bin outside [1, bins]");
    }
    BetaParams outcomes;
    for (const auto& o : observations) (is_success(o.outcome_rating) ? outcomes.alpha : outcomes.beta) += 1.0;
    const double width = 1.0 / bins;
    return interval_mass(outcomes, (bin - 1) * width, bin == bins ? 1.0 : bin * width);
}

BetaParams discount_opinion(const WitnessOpinion& opinion, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw Error(ErrorCode::ConfigError, "witness accuracy must lie in [0,1]");
    }
    const double e = expected_value(opinion.params);
    const double sigma = standard_deviation(opinion.params);
    const double e_bar = 0.5 + rho * (e - 0.5);
    const double sigma_bar = kUniformSigma + rho * (sigma - kUniformSigma);
    const double var_bar = sigma_bar * sigma_bar;
    const double f = 1.0 - e_bar;
    const double alpha = (e_bar * e_bar - e_bar * e_bar * e_bar) / var_bar - e_bar;
    const double beta = (f * f - f * f * f) / var_bar - f;
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw Error(ErrorCode::DegenerateMoments, "discounted opinion has non-positive parameters");
    }
    return BetaParams{alpha, beta};
}

BetaParams combine_evidence(const BetaParams& interaction, std::span<const BetaParams> discounted) {
    require_valid(interaction);
    BetaParams out = interaction;
    for (const auto& d : discounted) {
        require_valid(d);
        out.alpha += d.alpha;
        out.beta += d.beta;
    }
    return out;
}

DecompositionWeights decomposition_weights(const BetaParams& interaction,
                                           std::span<const BetaParams> discounted) {
    const double own = interaction.alpha + interaction.beta;
    double total = own;
    for (const auto& d : discounted) total += d.alpha + d.beta;
    if (!(total > 0.0)) throw Error(ErrorCode::NoEvidence, "no evidence mass");
    const double w = own / total;
    return DecompositionWeights{w, 1.0 - w};
}

std::optional<double> pooled_witness_trust(std::span<const BetaParams> discounted) {
    double a = 0.0;
    double n = 0.0;
    for (const auto& d : discounted) {
        a += d.alpha;
        n += d.alpha + d.beta;
    }
    if (!(n > 0.0)) return std::nullopt;
    return a / n;
}

TermResult assess_term(const RatingStore& ratings, const ObservationStore& observations,
                       const AgentId& assessor, const AgentId& target, const Term& term,
                       const TravosConfig& config) {
    config.validate();
    TermResult result{TermAssessment{term, {}, 0.5}, {}, {}, 0.0, false, false, std::nullopt, {}};

    std::vector<double> own;
    for (const auto& r : ratings.query({assessor, target, term, ReputationType::Interaction, {}})) {
        own.push_back(r.value);
    }
    result.interaction = beta_from_outcomes(own);
    result.interaction_confidence = confidence(result.interaction, config.epsilon);
    result.low_confidence = result.interaction_confidence < config.confidence_threshold;

    std::map<AgentId, std::vector<double>> by_witness;
    for (const auto& r : ratings.query({std::nullopt, target, term, ReputationType::Witness, {}})) {
        by_witness[r.source].push_back(r.value);
    }
    std::vector<BetaParams> discounted;
    for (const auto& [witness, values] : by_witness) {
        WitnessDiagnostic diag{witness, make_opinion(witness, target, term, beta_from_outcomes(values)),
                               0.0, {}, false};
        const int bin = opinion_bin(diag.opinion.raw_expected, config.bins);
        const auto history = observations.query(assessor, witness, term, bin, config.bins);
        diag.accuracy = witness_accuracy(history, bin, config.bins);
        try {
            diag.discounted = discount_opinion(diag.opinion, diag.accuracy);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateMoments) throw;
            diag.discounted = BetaParams{};
            diag.clamped = true;
        }
        discounted.push_back(diag.discounted);
        result.witnesses.push_back(std::move(diag));
    }
    result.witness_trust = pooled_witness_trust(discounted);

    const double own_trust = expected_value(result.interaction);
    if (result.low_confidence && !discounted.empty()) {
        result.witnesses_consulted = true;
        result.combined = combine_evidence(result.interaction, discounted);
        const auto weights = decomposition_weights(result.interaction, discounted);
        result.fragment.components = {
            ComponentTrust{ReputationType::Interaction, own_trust, weights.interaction, 1.0},
            ComponentTrust{ReputationType::Witness, result.witness_trust, weights.witness, 1.0}};
    } else {
        result.combined = result.interaction;
        result.fragment.components = {
            ComponentTrust{ReputationType::Interaction, own_trust, 1.0, 1.0},
            ComponentTrust{ReputationType::Witness, std::nullopt, 0.0, 1.0}};
    }
    result.fragment.term_trust = expected_value(result.combined);
    return result;
}

TravosAssessment assess_travos(const RatingStore& ratings, const ObservationStore& observations,
                               const AgentId& assessor, const AgentId& target,
                               const Preferences& prefs, const TravosConfig& config) {
    TravosAssessment out{Assessment{assessor, target, {}, 0.0}, {}};
    std::map<Term, double> trusts;
    for (const auto& term : prefs.terms()) {
        auto result = assess_term(ratings, observations, assessor, target, term, config);
        trusts.emplace(term, result.fragment.term_trust);
        out.assessment.per_term.push_back(result.fragment);
        out.terms.push_back(std::move(result));
    }
    out.assessment.overall = overall_trust(trusts, prefs.term_weight_map());
    return out;
}

}  // namespace reptrace::travos
