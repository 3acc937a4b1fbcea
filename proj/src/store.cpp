#include "reptrace/store.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace reptrace {

bool RatingPattern::matches(const Rating& r) const {
    if (source && *source != r.source) return false;
    if (target && *target != r.target) return false;
    if (term && *term != r.term) return false;
    if (rep_type && *rep_type != r.rep_type) return false;
    if (interaction_id && r.interaction_id != interaction_id) return false;
    return true;
}

RatingStore::RatingStore(std::optional<std::size_t> history_cap, std::optional<AgentId> owner)
    : history_cap_(history_cap), owner_(std::move(owner)) {
    if (history_cap_ && *history_cap_ == 0) {
        throw Error(ErrorCode::ConfigError, "history cap must be positive");
    }
}

bool RatingStore::capped(const Rating& r) const {
    if (!history_cap_) return false;
    return !owner_ || r.source == *owner_;
}

void RatingStore::insert(Rating rating) {
    const bool cap_applies = capped(rating);
    const AgentId source = rating.source;
    records_.push_back(std::move(rating));
    if (!cap_applies) return;

    std::size_t count = 0;
    for (const auto& r : records_) {
        if (r.source == source) ++count;
    }
    while (count > *history_cap_) {
        // Oldest by timestamp; the first such record in insertion order wins ties.
        auto oldest = records_.end();
        for (auto it = records_.begin(); it != records_.end(); ++it) {
            if (it->source != source) continue;
            if (oldest == records_.end() || it->timestamp < oldest->timestamp) oldest = it;
        }
        records_.erase(oldest);
        --count;
    }
}

std::vector<Rating> RatingStore::query(const RatingPattern& pattern) const {
    std::vector<Rating> out;
    for (const auto& r : records_) {
        if (pattern.matches(r)) out.push_back(r);
    }
    std::sort(out.begin(), out.end(), rating_less);
    return out;
}

std::uint64_t RatingStore::latest_timestamp() const {
    std::uint64_t latest = 0;
    for (const auto& r : records_) latest = std::max(latest, r.timestamp);
    return latest;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (!line.empty() && line.back() == '\t') fields.emplace_back();
    return fields;
}

}  // namespace

void RatingStore::save_tsv(std::ostream& os) const {
    os << "#source\ttarget\tterm\trep_type\tvalue\traw_value\ttimestamp\tinteraction_id\n";
    std::ostringstream line;
    line.precision(17);
    for (const auto& r : records_) {
        line.str({});
        line << r.source.str() << '\t' << r.target.str() << '\t' << r.term.name() << '\t'
             << to_string(r.rep_type) << '\t' << r.value << '\t' << r.raw_value << '\t'
             << r.timestamp << '\t' << r.interaction_id.value_or("") << '\n';
        os << line.str();
    }
}

RatingStore RatingStore::load_tsv(std::istream& is, std::optional<std::size_t> history_cap,
                                  std::optional<AgentId> owner) {
    RatingStore store(history_cap, std::move(owner));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        const auto f = split_tabs(line);
        if (f.size() != 8) {
            throw Error(ErrorCode::SchemaError,
                        "line " + std::to_string(lineno) + ": expected 8 tab-separated fields");
        }
        try {
            Rating r{AgentId(f[0]),
                     AgentId(f[1]),
                     Term(f[2]),
                     parse_reputation_type(f[3]),
                     std::stod(f[4]),
                     std::stod(f[5]),
                     std::stoull(f[6]),
                     f[7].empty() ? std::nullopt : std::optional<std::string>(f[7])};
            if (r.value < 0.0 || r.value > 1.0) {
                throw Error(ErrorCode::OutOfRange, "normalized value outside [0,1]");
            }
            store.insert(std::move(r));
        } catch (const std::logic_error& e) {
            throw Error(ErrorCode::SchemaError, "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return store;
}

void RoleRuleStore::add_rule(RoleRule rule) {
    if (!(rule.likelihood >= 0.0 && rule.likelihood <= 1.0)) {
        throw Error(ErrorCode::ConfigError, "role rule likelihood must lie in [0,1]");
    }
    rules_.push_back(std::move(rule));
}

void RoleRuleStore::assign_role(const AgentId& agent, std::string role) {
    auto& held = roles_[agent];
    if (std::find(held.begin(), held.end(), role) == held.end()) held.push_back(std::move(role));
}

std::vector<RoleRule> RoleRuleStore::matching(const AgentId& assessor, const AgentId& target,
                                              const Term& term) const {
    auto holds = [this](const AgentId& agent, const std::string& role) {
        auto it = roles_.find(agent);
        return it != roles_.end() && std::find(it->second.begin(), it->second.end(), role) !=
                                         it->second.end();
    };
    std::vector<RoleRule> out;
    for (const auto& rule : rules_) {
        if (rule.term == term && holds(assessor, rule.role_a) && holds(target, rule.role_b)) {
            out.push_back(rule);
        }
    }
    return out;
}

int opinion_bin(double opinion, int bins) {
    if (bins < 1) throw Error(ErrorCode::BadBin, "bin count must be positive");
    if (!(opinion >= 0.0 && opinion <= 1.0)) {
        throw Error(ErrorCode::BadBin, "opinion outside [0,1]");
    }
    const int bin = static_cast<int>(opinion * bins) + 1;
    return std::min(bin, bins);
}

void ObservationStore::insert(ObservationRecord record) {
    if (!(record.opinion_value >= 0.0 && record.opinion_value <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "observation opinion outside [0,1]");
    }
    records_.push_back(std::move(record));
}

std::vector<ObservationRecord> ObservationStore::query(const AgentId& assessor,
                                                       const AgentId& witness, const Term& term,
                                                       int bin, int bins) const {
    if (bins < 1 || bin < 1 || bin > bins) {
        throw Error(ErrorCode::BadBin,
                    "bin " + std::to_string(bin) + " outside [1, " + std::to_string(bins) + "]");
    }
    std::vector<ObservationRecord> out;
    for (const auto& r : records_) {
        if (r.assessor == assessor && r.witness == witness && r.term == term &&
            opinion_bin(r.opinion_value, bins) == bin) {
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace reptrace
