#pragma once
// Pattern-queryable rating, role-rule and observation databases.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reptrace/core.hpp"

namespace reptrace {

/// Each field either pins a value or matches anything (nullopt).
struct RatingPattern {
    std::optional<AgentId> source;
    std::optional<AgentId> target;
    std::optional<Term> term;
    std::optional<ReputationType> rep_type;
    std::optional<std::string> interaction_id;

    bool matches(const Rating& r) const;
};

/// Ordered multiset of ratings with an optional per-source history cap H.
///
/// When the store has an owner, the cap applies only to ratings the owner
/// authored; otherwise it applies to every source separately. Eviction
/// removes the oldest record by timestamp, breaking ties by insertion order.
class RatingStore {
public:
    RatingStore() = default;
    explicit RatingStore(std::optional<std::size_t> history_cap,
                         std::optional<AgentId> owner = std::nullopt);

    void insert(Rating rating);

    /// Matching records sorted by rating_less (timestamp first).
    std::vector<Rating> query(const RatingPattern& pattern) const;

    /// Records in insertion order.
    const std::vector<Rating>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    std::optional<std::size_t> history_cap() const noexcept { return history_cap_; }
    const std::optional<AgentId>& owner() const noexcept { return owner_; }

    /// Latest timestamp in the store (0 when empty).
    std::uint64_t latest_timestamp() const;

    /// Tab-separated flat file with a '#'-prefixed header line; field order is
    /// source, target, term, rep_type, value, raw_value, timestamp, interaction_id.
    void save_tsv(std::ostream& os) const;
    static RatingStore load_tsv(std::istream& is, std::optional<std::size_t> history_cap = std::nullopt,
                                std::optional<AgentId> owner = std::nullopt);

private:
    bool capped(const Rating& r) const;

    std::optional<std::size_t> history_cap_;
    std::optional<AgentId> owner_;
    std::vector<Rating> records_;
};

/// (role_a, role_b, t, e, v): an agent in role_b is expected, with likelihood
/// e, to perform at v on term t for an agent in role_a.
struct RoleRule {
    std::string role_a;
    std::string role_b;
    Term term;
    double likelihood = 0.0;
    double expected_value = 0.0;  // native scale
};

class RoleRuleStore {
public:
    void add_rule(RoleRule rule);
    void assign_role(const AgentId& agent, std::string role);

    /// Rules whose roles are held by (assessor, target) and whose term matches.
    std::vector<RoleRule> matching(const AgentId& assessor, const AgentId& target,
                                   const Term& term) const;

    const std::vector<RoleRule>& rules() const noexcept { return rules_; }
    const std::map<AgentId, std::vector<std::string>>& roles() const noexcept { return roles_; }

private:
    std::vector<RoleRule> rules_;
    std::map<AgentId, std::vector<std::string>> roles_;
};

/// A past witness opinion paired with the outcome of the interaction it informed.
struct ObservationRecord {
    AgentId assessor;
    AgentId witness;
    AgentId target;
    Term term;
    std::string interaction_id;
    double opinion_value = 0.5;  // expected value of the witness's beta opinion
    double outcome_rating = 0.0;
};

/// 1-based bin of an opinion among `bins` equal bins of [0,1]; the last bin
/// is closed at 1. Throws BadBin for bins < 1 or an opinion outside [0,1].
int opinion_bin(double opinion, int bins);

class ObservationStore {
public:
    void insert(ObservationRecord record);

    /// Records from `assessor` about `witness` on `term` whose opinion lies in
    /// bin `bin` of `bins`. Throws BadBin when bin is outside [1, bins].
    std::vector<ObservationRecord> query(const AgentId& assessor, const AgentId& witness,
                                         const Term& term, int bin, int bins) const;

    const std::vector<ObservationRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }

private:
    std::vector<ObservationRecord> records_;
};

}  // namespace reptrace
