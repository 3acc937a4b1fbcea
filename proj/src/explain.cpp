#include "reptrace/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace reptrace::explain {

namespace {

using Mask = std::uint32_t;

double masked_sum(std::span<const double> values, Mask mask) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (mask & (Mask{1} << i)) sum += values[i];
    }
    return sum;
}

std::vector<std::size_t> indices_of(Mask mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
        if (mask & 1U) out.push_back(i);
    }
    return out;
}

struct Candidate {
    Mask pros = 0;
    Mask cons = 0;
    double pro_sum = 0.0;
    double con_sum = 0.0;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.pro_sum != b.pro_sum) return a.pro_sum > b.pro_sum;
    if (a.con_sum != b.con_sum) return a.con_sum > b.con_sum;
    const auto ap = indices_of(a.pros);
    const auto bp = indices_of(b.pros);
    if (ap != bp) return ap < bp;
    return indices_of(a.cons) < indices_of(b.cons);
}

std::optional<Candidate> best_of_size(std::span<const double> pros, std::span<const double> cons,
                                      int pro_count, int con_count) {
    const Mask all_cons = cons.empty() ? 0 : static_cast<Mask>((Mask{1} << cons.size()) - 1);
    std::optional<Candidate> best;
    for (Mask p = 0; p < (Mask{1} << pros.size()); ++p) {
        if (std::popcount(p) != pro_count) continue;
        const double pro_sum = masked_sum(pros, p);
        for (Mask c = 0; c <= all_cons; ++c) {
            if (std::popcount(c) != con_count) continue;
            if (!(pro_sum > masked_sum(cons, all_cons & ~c))) continue;
            Candidate cand{p, c, pro_sum, masked_sum(cons, c)};
            if (!best || better(cand, *best)) best = cand;
        }
    }
    return best;
}

SubsetChoice greedy_tradeoff(std::span<const double> pros, std::span<const double> cons) {
    auto by_weight = [](std::span<const double> v) {
        std::vector<std::size_t> order(v.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
        return order;
    };
    double remaining = std::accumulate(cons.begin(), cons.end(), 0.0);
    SubsetChoice out;
    double pro_sum = 0.0;
    for (auto i : by_weight(pros)) {
        out.pros.push_back(i);
        pro_sum += pros[i];
        if (pro_sum > remaining) break;
    }
    for (auto i : by_weight(cons)) {
        if (pro_sum > remaining) break;
        out.cons.push_back(i);
        remaining -= cons[i];
    }
    if (!(pro_sum > remaining)) throw Error(ErrorCode::Infeasible, "no decisive subset exists");
    std::sort(out.pros.begin(), out.pros.end());
    std::sort(out.cons.begin(), out.cons.end());
    return out;
}

// Sorts terms by weighted difference, declaration order breaking ties.
std::vector<Term> order_terms(std::vector<TermDifference> terms, ProsOrder order) {
    std::stable_sort(terms.begin(), terms.end(), [order](const auto& a, const auto& b) {
        return order == ProsOrder::Descending ? a.weighted > b.weighted : a.weighted < b.weighted;
    });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) out.push_back(std::move(t.term));
    return out;
}

void require_comparable(const ComparisonContext& ctx) {
    for (const auto& term : ctx.preferences.terms()) {
        if (!ctx.preferred.find(term) || !ctx.other.find(term)) {
            throw Error(ErrorCode::ConfigError,
                        "both assessments must cover term '" + term.name() + "'");
        }
    }
}

struct PermutationCandidate {
    std::vector<TypeSwap> swaps;
    double gap = 0.0;
    double preferred_trust = 0.0;
    double other_trust = 0.0;
};

double weight_of(std::span<const ComponentTrust> comps, ReputationType type) {
    for (const auto& c : comps) {
        if (c.rep_type == type) return c.value ? c.weight : 0.0;
    }
    return 0.0;
}

bool has_value(std::span<const ComponentTrust> comps, ReputationType type) {
    for (const auto& c : comps) {
        if (c.rep_type == type) return c.value.has_value() && c.weight > 0.0;
    }
    return false;
}

std::optional<double> value_of(std::span<const ComponentTrust> comps, ReputationType type) {
    for (const auto& c : comps) {
        if (c.rep_type == type) return c.value;
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Model model) { return model == Model::Fire ? "fire" : "travos"; }

Model parse_model(std::string_view text) {
    if (text == "fire" || text == "FIRE") return Model::Fire;
    if (text == "travos" || text == "TRAVOS") return Model::Travos;
    throw Error(ErrorCode::ConfigError, "unknown model '" + std::string(text) + "'");
}

const TravosTermDiagnostics* TravosDiagnostics::find(const Term& term) const {
    for (const auto& t : terms) {
        if (t.term == term) return &t;
    }
    return nullptr;
}

std::string_view kind_name(const Argument& argument) {
    struct Visitor {
        std::string_view operator()(const DecisiveDominance&) const { return "decisive_dominance"; }
        std::string_view operator()(const DecisiveTradeoff&) const { return "decisive_tradeoff"; }
        std::string_view operator()(const TypePermutation&) const { return "type_permutation"; }
        std::string_view operator()(const FireRecencyGlobal&) const { return "fire_recency_global"; }
        std::string_view operator()(const FireRecencyLocal&) const { return "fire_recency_local"; }
        std::string_view operator()(const TravosLowConfidence&) const {
            return "travos_low_confidence";
        }
    };
    return std::visit(Visitor{}, argument);
}

std::vector<TermDifference> term_differences(const ComparisonContext& ctx) {
    require_comparable(ctx);
    double weight_sum = 0.0;
    for (const auto& [term, w] : ctx.preferences.term_weights) weight_sum += w;
    if (!(weight_sum > 0.0)) throw Error(ErrorCode::WeightSumZero, "term weights sum to zero");
    std::vector<TermDifference> out;
    for (const auto& [term, w] : ctx.preferences.term_weights) {
        const double delta = ctx.preferred.at(term).term_trust - ctx.other.at(term).term_trust;
        out.push_back(TermDifference{term, delta, (w / weight_sum) * std::abs(delta)});
    }
    return out;
}

bool dominates(const ComparisonContext& ctx) {
    bool strictly_better = false;
    for (const auto& d : term_differences(ctx)) {
        if (d.delta < 0.0) return false;
        strictly_better = strictly_better || d.delta > 0.0;
    }
    return strictly_better;
}

DecisiveDominance decisive_terms_dominance(const ComparisonContext& ctx,
                                           const ExplainOptions& options) {
    if (!dominates(ctx)) throw Error(ErrorCode::NotDominant, "preferred does not dominate other");
    const auto diffs = term_differences(ctx);
    const double n = static_cast<double>(diffs.size());
    double mean_delta = 0.0;
    for (const auto& d : diffs) mean_delta += std::abs(d.delta);
    mean_delta /= n;
    DecisiveDominance out;
    out.reference = (1.0 / n) * mean_delta;

    std::vector<TermDifference> decisive;
    for (const auto& d : diffs) {
        if (d.weighted > out.reference) decisive.push_back(d);
    }
    if (decisive.empty()) {
        auto best = std::max_element(diffs.begin(), diffs.end(), [](const auto& a, const auto& b) {
            return a.weighted < b.weighted;
        });
        decisive.push_back(*best);
    }
    out.pros = order_terms(std::move(decisive), options.pros_order);
    return out;
}

SubsetChoice select_tradeoff(std::span<const double> pros, std::span<const double> cons) {
    if (pros.empty()) throw Error(ErrorCode::Infeasible, "no pros to outweigh the cons");
    if (pros.size() > kExhaustiveLimit || cons.size() > kExhaustiveLimit) {
        return greedy_tradeoff(pros, cons);
    }
    const int np = static_cast<int>(pros.size());
    const int nc = static_cast<int>(cons.size());
    auto to_choice = [](const Candidate& c) {
        return SubsetChoice{indices_of(c.pros), indices_of(c.cons)};
    };
    for (int k = 1; k <= np; ++k) {
        if (auto best = best_of_size(pros, cons, k, 0)) return to_choice(*best);
    }
    for (int k = 1; k <= np; ++k) {
        for (int c = 1; c <= nc; ++c) {
            if (auto best = best_of_size(pros, cons, k, c)) return to_choice(*best);
        }
    }
    throw Error(ErrorCode::Infeasible, "no decisive subset exists");
}

DecisiveTradeoff decisive_terms_tradeoff(const ComparisonContext& ctx,
                                         const ExplainOptions& options) {
    std::vector<TermDifference> pros;
    std::vector<TermDifference> cons;
    for (auto& d : term_differences(ctx)) {
        if (d.delta > 0.0) pros.push_back(std::move(d));
        else if (d.delta < 0.0) cons.push_back(std::move(d));
    }
    std::vector<double> pro_w;
    std::vector<double> con_w;
    for (const auto& d : pros) pro_w.push_back(d.weighted);
    for (const auto& d : cons) con_w.push_back(d.weighted);
    const auto choice = select_tradeoff(pro_w, con_w);

    std::vector<TermDifference> chosen_pros;
    std::vector<TermDifference> chosen_cons;
    for (auto i : choice.pros) chosen_pros.push_back(pros[i]);
    for (auto i : choice.cons) chosen_cons.push_back(cons[i]);
    return DecisiveTradeoff{order_terms(std::move(chosen_pros), options.pros_order),
                            order_terms(std::move(chosen_cons), ProsOrder::Descending)};
}

double permuted_term_trust(std::span<const ComponentTrust> components,
                           std::span<const TypeSwap> swaps) {
    std::vector<ComponentTrust> permuted(components.begin(), components.end());
    auto slot = [&](ReputationType type) -> ComponentTrust* {
        for (auto& c : permuted) {
            if (c.rep_type == type) return &c;
        }
        return nullptr;
    };
    for (const auto& s : swaps) {
        auto* a = slot(s.less_important);
        auto* b = slot(s.more_important);
        if (!a || !b) throw Error(ErrorCode::ConfigError, "swap names a missing component");
        std::swap(a->weight, b->weight);
    }
    return combine_term_trust(permuted);
}

std::optional<TypePermutation> find_inverting_permutation(
    const Term& term, std::span<const ComponentTrust> preferred,
    std::span<const ComponentTrust> other) {
    std::vector<ReputationType> shared;
    for (auto type : kAllReputationTypes) {
        if (has_value(preferred, type) && has_value(other, type)) shared.push_back(type);
    }
    if (shared.size() < 2) return std::nullopt;

    std::vector<std::size_t> perm(shared.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<PermutationCandidate> best;
    while (std::next_permutation(perm.begin(), perm.end())) {
        // Position i receives the weight held by perm[i]; each cycle
        // (i0 i1 ... ik) becomes the transpositions (i0 i1), (i1 i2), ...
        std::vector<TypeSwap> swaps;
        std::vector<bool> seen(perm.size(), false);
        double gap = 0.0;
        for (std::size_t start = 0; start < perm.size(); ++start) {
            if (seen[start]) continue;
            std::size_t cur = start;
            seen[cur] = true;
            while (!seen[perm[cur]]) {
                const std::size_t next = perm[cur];
                seen[next] = true;
                const auto a = shared[cur];
                const auto b = shared[next];
                const double wa = weight_of(preferred, a);
                const double wb = weight_of(preferred, b);
                swaps.push_back(wa <= wb ? TypeSwap{a, b} : TypeSwap{b, a});
                gap += std::abs(wa - wb);
                cur = next;
            }
        }
        const double p = permuted_term_trust(preferred, swaps);
        const double o = permuted_term_trust(other, swaps);
        if (!(p < o)) continue;
        const bool improves = !best || swaps.size() < best->swaps.size() ||
                              (swaps.size() == best->swaps.size() && gap > best->gap);
        if (improves) best = PermutationCandidate{std::move(swaps), gap, p, o};
    }
    if (!best) return std::nullopt;
    return TypePermutation{term, std::move(best->swaps), best->preferred_trust, best->other_trust};
}

std::optional<TypePermutation> invert_permutation(const ComparisonContext& ctx, const Term& term) {
    const auto& pref = ctx.preferred.at(term).components;
    const auto& oth = ctx.other.at(term).components;
    bool strictly_better = false;
    bool worse = false;
    for (auto type : kAllReputationTypes) {
        if (!has_value(pref, type) || !has_value(oth, type)) continue;
        const double p = *value_of(pref, type);
        const double o = *value_of(oth, type);
        strictly_better = strictly_better || p > o;
        worse = worse || p < o;
    }
    if (strictly_better && !worse) return std::nullopt;
    return find_inverting_permutation(term, pref, oth);
}

std::optional<FireRecencyGlobal> fire_recency_global(const ComparisonContext& ctx) {
    if (ctx.model != Model::Fire) throw Error(ErrorCode::ConfigError, "recency needs a FIRE context");
    if (!ctx.fire) throw Error(ErrorCode::MissingDiagnostics, "no uniform-weight baseline");
    if (ctx.preferred.overall > ctx.other.overall &&
        ctx.fire->preferred_uniform.overall < ctx.fire->other_uniform.overall) {
        return FireRecencyGlobal{};
    }
    return std::nullopt;
}

std::optional<FireRecencyLocal> fire_recency_local(const ComparisonContext& ctx, const Term& term,
                                                   ReputationType type) {
    if (ctx.model != Model::Fire) throw Error(ErrorCode::ConfigError, "recency needs a FIRE context");
    if (!ctx.fire) throw Error(ErrorCode::MissingDiagnostics, "no uniform-weight baseline");
    const auto p = value_of(ctx.preferred.at(term).components, type);
    const auto o = value_of(ctx.other.at(term).components, type);
    const auto pu = value_of(ctx.fire->preferred_uniform.at(term).components, type);
    const auto ou = value_of(ctx.fire->other_uniform.at(term).components, type);
    if (!p || !o || !pu || !ou) return std::nullopt;
    if (*p > *o && *pu < *ou) return FireRecencyLocal{term, type};
    return std::nullopt;
}

std::optional<TravosLowConfidence> travos_low_confidence(const ComparisonContext& ctx,
                                                         const Term& term) {
    if (ctx.model != Model::Travos) {
        throw Error(ErrorCode::ConfigError, "low-confidence argument needs a TRAVOS context");
    }
    if (!ctx.travos) throw Error(ErrorCode::MissingDiagnostics, "no TRAVOS diagnostics");
    const auto* d = ctx.travos->find(term);
    if (!d) throw Error(ErrorCode::MissingDiagnostics, "no TRAVOS diagnostics for '" + term.name() + "'");
    if (!(d->preferred_low || d->other_low)) return std::nullopt;
    if (!d->preferred_witness || !d->other_witness) return std::nullopt;
    if (*d->preferred_witness > *d->other_witness) return TravosLowConfidence{term};
    return std::nullopt;
}

Explanation explain(const ComparisonContext& ctx, const ExplainOptions& options) {
    const double gap = ctx.preferred.overall - ctx.other.overall;
    if (std::abs(gap) <= kAssessmentTolerance) {
        throw Error(ErrorCode::AmbiguousOrder, ctx.preferred.target.str() + " and " +
                                                   ctx.other.target.str() + " have equal scores");
    }
    if (gap < 0.0) {
        throw Error(ErrorCode::NotPreferred, ctx.other.target.str() + " outranks " +
                                                 ctx.preferred.target.str());
    }

    Explanation out{ctx.assessor, ctx.preferred.target, ctx.other.target, ctx.model, {}};
    std::vector<Term> pros;
    if (dominates(ctx)) {
        auto d = decisive_terms_dominance(ctx, options);
        pros = d.pros;
        out.arguments.emplace_back(std::move(d));
    } else {
        auto d = decisive_terms_tradeoff(ctx, options);
        pros = d.pros;
        out.arguments.emplace_back(std::move(d));
    }

    if (ctx.model == Model::Fire) {
        if (auto f = fire_recency_global(ctx)) out.arguments.emplace_back(*f);
    }

    for (const auto& term : ctx.preferences.terms()) {
        if (std::find(pros.begin(), pros.end(), term) == pros.end()) continue;
        if (auto pi = invert_permutation(ctx, term)) out.arguments.emplace_back(std::move(*pi));
        if (ctx.model == Model::Travos) {
            if (auto c = travos_low_confidence(ctx, term)) out.arguments.emplace_back(std::move(*c));
        } else {
            for (auto type : kAllReputationTypes) {
                if (auto f = fire_recency_local(ctx, term, type)) {
                    out.arguments.emplace_back(std::move(*f));
                }
            }
        }
    }
    return out;
}

}  // namespace reptrace::explain
