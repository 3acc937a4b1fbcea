#include "reptrace/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace reptrace::sim {

namespace {

constexpr double kProbabilityTolerance = 1e-9;

void require_distribution(const std::array<double, 4>& probs, std::string_view what) {
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw Error(ErrorCode::ConfigError, std::string(what) + " has a negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
        throw Error(ErrorCode::ConfigError, std::string(what) + " does not sum to 1");
    }
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

const std::vector<std::string_view>& outcome_terms() {
    static const std::vector<std::string_view> terms = {kTimeliness, kQuality, kSupport, kPrice,
                                                        kReliability};
    return terms;
}

std::string_view to_string(ParcelCondition c) {
    switch (c) {
        case ParcelCondition::PerfectConditions: return "perfect_conditions";
        case ParcelCondition::DamagedPackage: return "damaged_package";
        case ParcelCondition::DamagedProduct: return "damaged_product";
        case ParcelCondition::Lost: return "lost";
    }
    return "perfect_conditions";
}

std::string_view to_string(ServiceOutcome s) {
    switch (s) {
        case ServiceOutcome::EasyContactSolved: return "easy_contact_solved";
        case ServiceOutcome::EasyContactUnresolved: return "easy_contact_unresolved";
        case ServiceOutcome::DifficultContactSolved: return "difficult_contact_solved";
        case ServiceOutcome::DifficultContactUnresolved: return "difficult_contact_unresolved";
    }
    return "easy_contact_solved";
}

void PhaseParams::validate() const {
    if (!std::isfinite(days_mu)) throw Error(ErrorCode::ConfigError, "days_mu must be finite");
    if (!(days_sigma >= 0.0)) throw Error(ErrorCode::ConfigError, "days_sigma must be >= 0");
    if (max_days < 1) throw Error(ErrorCode::ConfigError, "max_days must be positive");
    if (!(price > 0.0)) throw Error(ErrorCode::ConfigError, "price must be positive");
    require_distribution(parcel_probs, "parcel_probs");
    require_distribution(service_probs, "service_probs");
}

void ProviderModel::validate() const {
    for (const auto& p : phases) p.validate();
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t state = seed;
    engine_.seed(splitmix64(state));
}

Rng Rng::stream(std::uint64_t seed, std::string_view label) {
    std::uint64_t state = seed ^ fnv1a(label);
    return Rng(splitmix64(state));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal(double mu, double sigma) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    if (sigma == 0.0) return mu;
    return mu + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::categorical(const std::array<double, 4>& probs) {
    const double u = uniform();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        last_positive = i;
        cumulative += probs[i];
        if (u < cumulative) return i;
    }
    return last_positive;
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::ConfigError, "cannot draw from an empty range");
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
}

Outcome simulate_interaction(const ProviderModel& provider, int phase, Rng& rng) {
    if (phase != 1 && phase != 2) throw Error(ErrorCode::ConfigError, "phase must be 1 or 2");
    const auto& p = provider.phases[static_cast<std::size_t>(phase - 1)];
    Outcome out;
    const double days = rng.normal(p.days_mu, p.days_sigma);
    out.days = std::max(1, static_cast<int>(std::lround(days)));
    out.max_days = p.max_days;
    out.price = p.price;
    out.parcel = static_cast<ParcelCondition>(rng.categorical(p.parcel_probs));
    out.service = static_cast<ServiceOutcome>(rng.categorical(p.service_probs));
    return out;
}

void RaterProfile::validate() const {
    for (double s : parcel_scores) {
        if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::ConfigError, "parcel scores must lie in [0,1]");
    }
    for (double s : service_scores) {
        if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::ConfigError, "service scores must lie in [0,1]");
    }
    if (!(price_ceiling > 0.0)) throw Error(ErrorCode::ConfigError, "price ceiling must be positive");
}

std::map<std::string, std::optional<double>> rate_outcome(const Outcome& outcome,
                                                          const RaterProfile& profile,
                                                          std::optional<double> previous_timeliness) {
    const double span = std::max(1, outcome.max_days - 1);
    const double timeliness = std::clamp(1.0 - (outcome.days - 1) / span, 0.0, 1.0);
    std::map<std::string, std::optional<double>> out;
    out[std::string(kTimeliness)] = timeliness;
    out[std::string(kQuality)] = profile.parcel_scores[static_cast<std::size_t>(outcome.parcel)];
    out[std::string(kSupport)] = profile.service_scores[static_cast<std::size_t>(outcome.service)];
    out[std::string(kPrice)] = std::clamp(1.0 - outcome.price / profile.price_ceiling, 0.0, 1.0);
    out[std::string(kReliability)] =
        previous_timeliness
            ? std::optional<double>(std::clamp(1.0 - std::abs(timeliness - *previous_timeliness), 0.0, 1.0))
            : std::nullopt;
    return out;
}

void Scenario::validate() const {
    if (rounds < 1) throw Error(ErrorCode::ConfigError, "rounds must be positive");
    preferences.validate();
    for (const auto& term : preferences.terms()) {
        const auto& known = outcome_terms();
        if (std::find(known.begin(), known.end(), term.name()) == known.end()) {
            throw Error(ErrorCode::ConfigError, "term '" + term.name() + "' is not rated by the simulator");
        }
    }
    fire.validate();
    travos.validate();
    profile.validate();
    if (providers.empty()) throw Error(ErrorCode::ConfigError, "scenario has no providers");
    if (agents.empty()) throw Error(ErrorCode::ConfigError, "scenario has no agents");
    std::vector<AgentId> ids;
    for (const auto& p : providers) {
        p.validate();
        ids.push_back(p.id);
    }
    for (const auto& a : agents) ids.push_back(a.id);
    auto sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorCode::ConfigError, "agent and provider ids must be unique");
    }
    for (const auto& a : agents) {
        for (const auto& w : a.witnesses) {
            const bool known = std::any_of(agents.begin(), agents.end(),
                                           [&](const AgentSpec& s) { return s.id == w; });
            if (!known) throw Error(ErrorCode::ConfigError, "unknown witness '" + w.str() + "'");
            if (w == a.id) throw Error(ErrorCode::ConfigError, "agent '" + w.str() + "' cannot witness itself");
        }
    }
}

const AgentStores* SimulationResult::find(const AgentId& agent) const {
    for (const auto& a : agents) {
        if (a.agent == agent) return &a;
    }
    return nullptr;
}

int phase_switch_round(int rounds) { return (rounds + 1) / 2; }

SimulationResult run_scenario(const Scenario& scenario) {
    scenario.validate();
    const auto terms = scenario.preferences.terms();

    SimulationResult result;
    std::vector<Rng> rngs;
    for (const auto& spec : scenario.agents) {
        result.agents.push_back(
            AgentStores{spec.id, RatingStore(scenario.history_cap, spec.id), ObservationStore{}});
        rngs.push_back(Rng::stream(scenario.seed, spec.id.str()));
    }
    std::map<std::pair<AgentId, AgentId>, double> last_timeliness;
    const int switch_round = phase_switch_round(scenario.rounds);

    struct PendingOpinion {
        AgentId witness;
        Term term;
        double opinion;
    };

    for (int round = 0; round < scenario.rounds; ++round) {
        const int phase = round < switch_round ? 1 : 2;
        const auto ts = static_cast<std::uint64_t>(round);
        std::vector<Rating> fresh;

        for (std::size_t ai = 0; ai < scenario.agents.size(); ++ai) {
            const auto& spec = scenario.agents[ai];
            auto& stores = result.agents[ai];
            auto& rng = rngs[ai];
            const std::size_t pi = scenario.selection == SelectionPolicy::RoundRobin
                                       ? (static_cast<std::size_t>(round) + ai) % scenario.providers.size()
                                       : rng.index(scenario.providers.size());
            const auto& provider = scenario.providers[pi];
            const std::string iid = spec.id.str() + "@" + std::to_string(round);

            std::vector<PendingOpinion> pending;
            for (const auto& witness : spec.witnesses) {
                for (const auto& term : terms) {
                    const auto seen = stores.ratings.query(
                        {witness, provider.id, term, ReputationType::Witness, std::nullopt});
                    if (seen.empty()) continue;
                    std::vector<double> values;
                    for (const auto& r : seen) values.push_back(r.value);
                    pending.push_back({witness, term,
                                       travos::expected_value(travos::beta_from_outcomes(values))});
                }
            }

            const Outcome outcome = simulate_interaction(provider, phase, rng);
            const auto key = std::make_pair(spec.id, provider.id);
            auto prev = last_timeliness.find(key);
            const auto ratings = rate_outcome(
                outcome, scenario.profile,
                prev == last_timeliness.end() ? std::nullopt : std::optional<double>(prev->second));
            last_timeliness[key] = *ratings.at(std::string(kTimeliness));

            for (const auto& term : terms) {
                const auto& v = ratings.at(term.name());
                if (!v) continue;
                Rating r = make_rating(spec.id, provider.id, term, ReputationType::Interaction, *v,
                                       NativeRange::unit(), ts, iid);
                fresh.push_back(r);
                stores.ratings.insert(std::move(r));
            }
            for (auto& p : pending) {
                const auto& v = ratings.at(p.term.name());
                if (!v) continue;
                stores.observations.insert(
                    ObservationRecord{spec.id, p.witness, provider.id, p.term, iid, p.opinion, *v});
            }
        }

        for (std::size_t ai = 0; ai < scenario.agents.size(); ++ai) {
            const auto& witnesses = scenario.agents[ai].witnesses;
            for (const auto& r : fresh) {
                if (std::find(witnesses.begin(), witnesses.end(), r.source) == witnesses.end()) continue;
                Rating copy = r;
                copy.rep_type = ReputationType::Witness;
                result.agents[ai].ratings.insert(std::move(copy));
            }
        }
    }
    result.now = static_cast<std::uint64_t>(scenario.rounds - 1);
    return result;
}

}  // namespace reptrace::sim
