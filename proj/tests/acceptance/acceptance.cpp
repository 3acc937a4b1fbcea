// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "reptrace/cli.hpp"
#include "reptrace/explain.hpp"
#include "reptrace/pipeline.hpp"
#include "reptrace/table4.hpp"
#include "reptrace/travos.hpp"

using namespace reptrace;
using namespace reptrace::explain;

namespace {

int failures = 0;

// Exact halves such as 0.175 sit precisely on the +-0.005 boundary; allow for
// their binary representation.
constexpr double kHalfCent = 0.005 + 1e-12;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

bool criterion1() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    int matched = 0;
    for (const auto& row : table4::rows()) {
        const auto a = table4::assessment(row.provider);
        for (std::size_t i = 0; i < 3; ++i) {
            const double t = a.per_term[i].term_trust;
            const bool hit = table4::round2(t) == table4::round2(row.printed_term_trust[i]) &&
                             std::abs(t - row.printed_term_trust[i]) <= kHalfCent;
            matched += hit;
            ok = ok && hit;
        }
        const bool overall = table4::round2(a.overall) == table4::round2(row.printed_overall) &&
                             std::abs(a.overall - row.printed_overall) <= kHalfCent;
        ok = ok && overall;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok = ok && secs < 1.0;
    report(1, "running-example reproduction", ok,
           std::to_string(matched) + "/12 term trusts, scores " +
               fmt("%.2f %.2f", table4::round2(table4::assessment("B").overall),
                   table4::round2(table4::assessment("C").overall)) +
               fmt(" %.2f %.2f", table4::round2(table4::assessment("D").overall),
                   table4::round2(table4::assessment("E").overall)) +
               fmt(", %.4f s", secs));
    return ok;
}

bool criterion2() {
    const auto ctx = table4::context("B", "C");
    const bool dom = dominates(ctx);
    const auto d = decisive_terms_dominance(ctx);
    const bool ok = dom && std::abs(d.reference - 0.139) <= 0.001 &&
                    d.pros == std::vector<Term>{Term("quality"), Term("timeliness")};
    report(2, "Example 1 (B vs C)", ok,
           std::string(dom ? "domination" : "no domination") + fmt(", reference %.5f", d.reference) +
               ", decisive " + d.pros[0].name() + (d.pros.size() > 1 ? "+" + d.pros[1].name() : ""));
    return ok;
}

bool criterion3() {
    const auto ctx = table4::context("B", "D");
    if (dominates(ctx)) {
        report(3, "Example 2 (B vs D)", false, "domination path taken");
        return false;
    }
    const auto d = decisive_terms_tradeoff(ctx);
    std::vector<double> pros, cons;
    std::vector<Term> pro_terms;
    for (const auto& diff : term_differences(ctx)) {
        if (diff.delta > 0) {
            pros.push_back(diff.weighted);
            pro_terms.push_back(diff.term);
        } else if (diff.delta < 0) {
            cons.push_back(diff.weighted);
        }
    }
    const auto best = oracle::brute_force_tradeoff(pros, cons);
    const bool oracle_ok = best && best->cons.empty() && best->pros.size() == 1 &&
                           pro_terms[best->pros[0]] == Term("quality");
    const bool ok = d.pros == std::vector<Term>{Term("quality")} && d.cons.empty() && oracle_ok;
    report(3, "Example 2 (B vs D)", ok,
           "trade-off, P = {" + (d.pros.empty() ? std::string() : d.pros[0].name()) + "}, C size " +
               std::to_string(d.cons.size()) + (oracle_ok ? ", oracle agrees" : ", oracle disagrees"));
    return ok;
}

bool criterion4() {
    const auto pi = invert_permutation(table4::context("B", "E"), Term("timeliness"));
    const bool ok = pi && pi->swaps.size() == 1 &&
                    ((pi->swaps[0].less_important == ReputationType::Witness &&
                      pi->swaps[0].more_important == ReputationType::Interaction)) &&
                    std::abs(pi->preferred_trust - 0.6625) <= 0.005 && std::abs(pi->other_trust - 0.80) <= 0.005;
    report(4, "Example 3 (B vs E, timeliness)", ok,
           pi ? std::to_string(pi->swaps.size()) + " swap, " +
                    fmt("swapped trusts %.4f vs %.4f", pi->preferred_trust, pi->other_trust)
              : std::string("no permutation"));
    return ok;
}

bool criterion5() {
    using namespace reptrace::travos;
    double worst_conf = 0.0;
    for (double eps : {0.05, 0.1, 0.2}) worst_conf = std::max(worst_conf, std::abs(confidence({1, 1}, eps) - 2 * eps));

    oracle::Gen g(5005);
    double worst_zero = 0.0, worst_trip = 0.0;
    for (int i = 0; i < 100; ++i) {
        const BetaParams p{1.0 + g.integer(0, 50), 1.0 + g.integer(0, 50)};
        const auto op = make_opinion(AgentId("w"), AgentId("b"), Term("t"), p);
        const auto z = discount_opinion(op, 0.0);
        worst_zero = std::max({worst_zero, std::abs(z.alpha - 1.0), std::abs(z.beta - 1.0)});
        const auto f = discount_opinion(op, 1.0);
        worst_trip = std::max({worst_trip, std::abs(f.alpha - p.alpha), std::abs(f.beta - p.beta)});
    }

    double worst_sym = 0.0;
    const std::pair<double, double> shapes[] = {{1, 1}, {2, 5}, {7.5, 3}, {30, 42}, {1, 12}};
    for (const auto& [a, b] : shapes) {
        for (int k = 0; k < 50; ++k) {
            const double x = k / 49.0;
            const double lhs = regularized_incomplete_beta(x, a, b);
            const double rhs = 1.0 - regularized_incomplete_beta(1.0 - x, b, a);
            worst_sym = std::max(worst_sym, std::abs(lhs - rhs));
        }
    }
    const bool ok = worst_conf <= 1e-9 && worst_zero <= 1e-9 && worst_trip <= 1e-6 && worst_sym <= 1e-9;
    report(5, "TRAVOS numerics", ok,
           fmt("confidence err %.1e, rho=0 err %.1e, rho=1 err %.1e", worst_conf, worst_zero, worst_trip) +
               fmt(", symmetry err %.1e", worst_sym));
    return ok;
}

ComparisonContext random_context(oracle::Gen& g, int n) {
    Preferences prefs;
    for (int i = 0; i < n; ++i) prefs.term_weights.emplace_back(Term("t" + std::to_string(i)), g.uniform(0.05, 1.0));
    prefs.component_weights = {{ReputationType::Interaction, 1.0}};
    auto build = [&](const char* id) {
        std::vector<std::pair<Term, std::vector<ComponentTrust>>> per_term;
        for (int i = 0; i < n; ++i) {
            per_term.push_back(
                {Term("t" + std::to_string(i)), {ComponentTrust{ReputationType::Interaction, g.uniform(), 1.0, 1.0}}});
        }
        return assemble_assessment(AgentId("a"), AgentId(id), per_term, prefs);
    };
    auto p = build("p");
    auto o = build("o");
    return ComparisonContext{AgentId("a"), p, o, prefs, Model::Fire, FireDiagnostics{p, o}, std::nullopt};
}

bool criterion6() {
    oracle::Gen g(6006);
    int contexts = 0, context_hits = 0;
    while (contexts < 500) {
        const auto ctx = random_context(g, g.integer(2, 8));
        if (ctx.preferred.overall <= ctx.other.overall + 1e-9 || dominates(ctx)) continue;
        ++contexts;
        const auto d = decisive_terms_tradeoff(ctx);
        std::vector<double> pros, cons;
        std::vector<Term> pt, ct;
        for (const auto& diff : term_differences(ctx)) {
            if (diff.delta > 0) {
                pros.push_back(diff.weighted);
                pt.push_back(diff.term);
            } else if (diff.delta < 0) {
                cons.push_back(diff.weighted);
                ct.push_back(diff.term);
            }
        }
        const auto best = oracle::brute_force_tradeoff(pros, cons);
        if (!best) continue;
        std::vector<Term> ep, ec;
        for (auto i : best->pros) ep.push_back(pt[i]);
        for (auto i : best->cons) ec.push_back(ct[i]);
        auto got_p = d.pros, got_c = d.cons;
        std::sort(got_p.begin(), got_p.end());
        std::sort(got_c.begin(), got_c.end());
        std::sort(ep.begin(), ep.end());
        std::sort(ec.begin(), ec.end());
        context_hits += (got_p == ep && got_c == ec);
    }

    // Raw selections, where cons may have to be absorbed.
    int raw = 0, raw_hits = 0;
    while (raw < 500) {
        const int np = g.integer(1, 7);
        const int nc = g.integer(0, 8 - np);
        std::vector<double> pros(np), cons(nc);
        for (auto& v : pros) v = g.uniform(0.001, 0.2);
        for (auto& v : cons) v = g.uniform(0.001, 0.2);
        const auto best = oracle::brute_force_tradeoff(pros, cons);
        if (!best) continue;
        ++raw;
        const auto got = select_tradeoff(pros, cons);
        raw_hits += (got.pros == best->pros && got.cons == best->cons);
    }
    const bool ok = context_hits == contexts && raw_hits == raw;
    report(6, "trade-off minimality", ok,
           std::to_string(context_hits) + "/" + std::to_string(contexts) + " explained pairs, " +
               std::to_string(raw_hits) + "/" + std::to_string(raw) + " raw selections match the exhaustive optimum");
    return ok;
}

bool criterion7() {
    oracle::Gen g(7007);
    int instances = 0, emitted = 0, good = 0;
    while (instances < 500) {
        const int k = g.integer(2, 4);
        std::vector<double> pv(k), ov(k), w(k);
        std::vector<ComponentTrust> pc, oc;
        for (int i = 0; i < k; ++i) {
            pv[i] = g.uniform();
            ov[i] = g.uniform();
            w[i] = g.uniform(0.05, 1.0);
            pc.push_back({kAllReputationTypes[i], pv[i], w[i], 1.0});
            oc.push_back({kAllReputationTypes[i], ov[i], w[i], 1.0});
        }
        if (!(combine_term_trust(pc) > combine_term_trust(oc))) continue;
        ++instances;
        const auto pi = find_inverting_permutation(Term("t"), pc, oc);
        if (pi) {
            ++emitted;
            good += permuted_term_trust(pc, pi->swaps) < permuted_term_trust(oc, pi->swaps);
        } else {
            good += !oracle::min_inverting_swaps(pv, ov, w).has_value();
        }
    }
    const bool ok = good == instances;
    report(7, "permutation validity", ok,
           std::to_string(good) + "/" + std::to_string(instances) + " instances verified (" +
               std::to_string(emitted) + " with a permutation)");
    return ok;
}

bool criterion8() {
    auto doc_for = [](bool aged) {
        io::StoresDocument doc;
        doc.preferences.term_weights = {{Term("q"), 1.0}};
        doc.preferences.component_weights = {{ReputationType::Interaction, 1.0}};
        doc.fire.lambda = 1.0;
        doc.fire.importance = {{ReputationType::Interaction, 1.0}};
        doc.providers = {AgentId("p"), AgentId("o")};
        doc.agents.push_back(sim::AgentStores{AgentId("a"), RatingStore{}, ObservationStore{}});
        auto add = [&](const char* tgt, double v, std::uint64_t ts) {
            doc.agents[0].ratings.insert(make_rating(AgentId("a"), AgentId(tgt), Term("q"),
                                                     ReputationType::Interaction, v, NativeRange::unit(), ts));
        };
        add("p", 0.2, aged ? 0 : 1);
        add("p", 0.9, 1);
        add("o", 0.9, aged ? 0 : 1);
        add("o", 0.3, 1);
        doc.now = 1;
        return doc;
    };
    auto emitted = [](const io::StoresDocument& doc, const char* preferred, const char* other) {
        const auto ctx = pipeline::build_context(doc, Model::Fire, AgentId("a"), AgentId(preferred), AgentId(other));
        const auto e = explain::explain(ctx);
        for (const auto& a : e.arguments) {
            if (std::holds_alternative<FireRecencyGlobal>(a)) return true;
        }
        return false;
    };
    const bool conflict = emitted(doc_for(true), "p", "o");
    // With uniform timestamps o outranks p; explain the order that actually holds.
    const bool flat = emitted(doc_for(false), "o", "p");
    const bool ok = conflict && !flat;
    report(8, "FIRE recency argument", ok,
           std::string("aged ratings ") + (conflict ? "emit" : "do not emit") + ", uniform timestamps " +
               (flat ? "emit" : "emit none"));
    return ok;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool criterion9() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "reptrace_acceptance";
    fs::create_directories(dir);
    const std::string scenario = std::string(REPTRACE_SOURCE_DIR) + "/scenarios/demo.json";
    std::string outputs[2];
    bool ran = true;
    for (int run = 0; run < 2; ++run) {
        const auto stores = (dir / ("stores" + std::to_string(run) + ".json")).string();
        std::ostringstream out, err, sink;
        ran = ran && cli::run_cli({"simulate", scenario, "-o", stores}, sink, err) == 0;
        ran = ran && cli::run_cli({"assess", stores, "--assessor", "alice"}, out, err) == 0;
        ran = ran && cli::run_cli({"explain", stores, "--assessor", "alice", "--preferred", "swift", "--other",
                                   "budget"},
                                  out, err) == 0;
        outputs[run] = slurp(stores) + out.str();
        if (!ran) std::fprintf(stderr, "%s", err.str().c_str());
    }
    fs::remove_all(dir);
    const bool ok = ran && !outputs[0].empty() && outputs[0] == outputs[1];
    report(9, "end-to-end determinism", ok,
           std::string(ran ? "" : "pipeline failed, ") + std::to_string(outputs[0].size()) + " bytes, " +
               (outputs[0] == outputs[1] ? "identical" : "different"));
    return ok;
}

}  // namespace

int main() {
    auto guarded = [](int id, bool (*fn)()) {
        try {
            fn();
        } catch (const std::exception& e) {
            report(id, "criterion", false, std::string("threw: ") + e.what());
        }
    };
    guarded(1, criterion1);
    guarded(2, criterion2);
    guarded(3, criterion3);
    guarded(4, criterion4);
    guarded(5, criterion5);
    guarded(6, criterion6);
    guarded(7, criterion7);
    guarded(8, criterion8);
    guarded(9, criterion9);
    return failures == 0 ? 0 : 1;
}
