#pragma once
// Seedable delivery-service marketplace: providers draw outcomes from a
// two-phase parametric model, synthetic raters turn outcomes into per-term
// ratings, and a scenario run populates every agent's stores.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "reptrace/core.hpp"
#include "reptrace/explain.hpp"
#include "reptrace/fire.hpp"
#include "reptrace/store.hpp"
#include "reptrace/travos.hpp"

namespace reptrace::sim {

// Canonical term names produced by the default rater.
inline constexpr std::string_view kTimeliness = "timeliness";
inline constexpr std::string_view kQuality = "quality";
inline constexpr std::string_view kSupport = "support";
inline constexpr std::string_view kPrice = "price";
inline constexpr std::string_view kReliability = "reliability";

const std::vector<std::string_view>& outcome_terms();

enum class ParcelCondition : std::uint8_t { PerfectConditions, DamagedPackage, DamagedProduct, Lost };

enum class ServiceOutcome : std::uint8_t {
    EasyContactSolved,
    EasyContactUnresolved,
    DifficultContactSolved,
    DifficultContactUnresolved,
};

std::string_view to_string(ParcelCondition c);
std::string_view to_string(ServiceOutcome s);

struct PhaseParams {
    double days_mu = 3.0;
    double days_sigma = 1.0;
    int max_days = 7;
    double price = 10.0;
    std::array<double, 4> parcel_probs{1.0, 0.0, 0.0, 0.0};
    std::array<double, 4> service_probs{1.0, 0.0, 0.0, 0.0};

    void validate() const;
};

struct ProviderModel {
    AgentId id;
    std::array<PhaseParams, 2> phases;

    void validate() const;
};

struct Outcome {
    int days = 1;
    int max_days = 1;
    double price = 0.0;
    ParcelCondition parcel = ParcelCondition::PerfectConditions;
    ServiceOutcome service = ServiceOutcome::EasyContactSolved;
};

/// Deterministic random stream: SplitMix64-seeded std::mt19937_64 with
/// hand-written uniform, normal (Box-Muller) and categorical sampling, so
/// sequences are identical on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent stream keyed by a label (e.g. an agent id). Streams for
    /// different labels do not depend on each other or on creation order.
    static Rng stream(std::uint64_t seed, std::string_view label);

    std::uint64_t next_u64() { return engine_(); }
    double uniform();  // [0, 1) with 53 random bits
    double normal(double mu, double sigma);
    std::size_t categorical(const std::array<double, 4>& probs);
    std::size_t index(std::size_t n);  // uniform in [0, n)

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// phase is 1 or 2.
Outcome simulate_interaction(const ProviderModel& provider, int phase, Rng& rng);

/// Synthetic rater: tables mapping outcome categories to ratings.
struct RaterProfile {
    std::array<double, 4> parcel_scores{1.0, 0.6, 0.3, 0.0};
    std::array<double, 4> service_scores{1.0, 0.5, 0.5, 0.0};
    double price_ceiling = 100.0;

    void validate() const;
};

/// Per-term ratings in [0,1]; reliability is absent on a first interaction
/// and otherwise 1 - |timeliness now - timeliness last time|.
std::map<std::string, std::optional<double>> rate_outcome(
    const Outcome& outcome, const RaterProfile& profile,
    std::optional<double> previous_timeliness = std::nullopt);

enum class SelectionPolicy : std::uint8_t { UniformRandom, RoundRobin };

struct AgentSpec {
    AgentId id;
    std::vector<AgentId> witnesses;  // whose ratings this agent sees
};

struct Scenario {
    std::uint64_t seed = 0;
    int rounds = 10;
    SelectionPolicy selection = SelectionPolicy::UniformRandom;
    Preferences preferences;
    explain::Model model = explain::Model::Fire;
    fire::FireConfig fire;
    std::optional<std::size_t> history_cap;
    travos::TravosConfig travos;
    RaterProfile profile;
    std::vector<ProviderModel> providers;
    std::vector<AgentSpec> agents;

    /// Throws ConfigError.
    void validate() const;
};

struct AgentStores {
    AgentId agent;
    RatingStore ratings;
    ObservationStore observations;
};

struct SimulationResult {
    std::vector<AgentStores> agents;  // scenario declaration order
    std::uint64_t now = 0;            // last round index

    const AgentStores* find(const AgentId& agent) const;
};

/// 0-based round from which phase-2 parameters apply: ceil(rounds / 2).
int phase_switch_round(int rounds);

/// Runs every round: each agent picks a provider, consumes its witnesses'
/// opinions about that provider, interacts, rates, and records observation
/// tuples pairing those opinions with its own ratings. Witness ratings become
/// visible to observers at the end of each round.
SimulationResult run_scenario(const Scenario& scenario);

}  // namespace reptrace::sim
