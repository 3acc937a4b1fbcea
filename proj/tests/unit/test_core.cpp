#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "reptrace/core.hpp"
#include "reptrace/table4.hpp"

using namespace reptrace;

namespace {

ComponentTrust comp(ReputationType t, double v, double w) { return ComponentTrust{t, v, w, 1.0}; }

std::map<Term, double> qtc(double q, double t, double c) {
    return {{Term("quality"), q}, {Term("timeliness"), t}, {Term("cost"), c}};
}

}  // namespace

TEST_CASE("identifiers reject empty strings") {
    CHECK_THROWS_AS(AgentId(""), Error);
    CHECK_THROWS_AS(Term(""), Error);
    CHECK(AgentId("a") == AgentId("a"));
    CHECK(AgentId("a") != AgentId("A"));
}

TEST_CASE("reputation types parse from names and symbols") {
    for (auto t : kAllReputationTypes) {
        CHECK(parse_reputation_type(to_string(t)) == t);
        CHECK(parse_reputation_type(symbol(t)) == t);
    }
    CHECK_THROWS_AS(parse_reputation_type("gossip"), Error);
}

TEST_CASE("normalize_rating maps native ranges onto [0,1]") {
    CHECK(normalize_rating(-1.0, NativeRange::fire()) == 0.0);
    CHECK(normalize_rating(0.0, NativeRange::fire()) == 0.5);
    CHECK(normalize_rating(1.0, NativeRange::travos()) == 1.0);
    CHECK(normalize_rating(0.0, NativeRange::travos()) == 0.0);
    try {
        normalize_rating(1.5, NativeRange::fire());
        FAIL("expected OutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfRange);
    }
    CHECK_THROWS_AS(normalize_rating(0.5, NativeRange::travos()), Error);
}

TEST_CASE("normalization is monotone and inverts exactly") {
    oracle::Gen g(11);
    const NativeRange ranges[] = {NativeRange::fire(), NativeRange::unit(), {NativeRange::Kind::Interval, -3.0, 7.0}};
    for (const auto& r : ranges) {
        for (int i = 0; i < 200; ++i) {
            const double a = g.uniform(r.lo, r.hi);
            const double b = g.uniform(r.lo, r.hi);
            const double na = normalize_rating(a, r);
            CHECK(std::abs(denormalize_rating(na, r) - a) <= 1e-12);
            if (a < b) CHECK(na <= normalize_rating(b, r));
        }
    }
}

TEST_CASE("combine_term_trust is the weighted mean of present components") {
    const std::vector<ComponentTrust> q = {comp(ReputationType::Interaction, 0.75, 0.75),
                                           comp(ReputationType::Witness, 0.95, 0.25)};
    CHECK(combine_term_trust(q) == doctest::Approx(0.80).epsilon(1e-12));
    const std::vector<ComponentTrust> t = {comp(ReputationType::Interaction, 0.55, 0.75),
                                           comp(ReputationType::Witness, 0.70, 0.25)};
    CHECK(combine_term_trust(t) == doctest::Approx(0.5875).epsilon(1e-12));
    const std::vector<ComponentTrust> single = {comp(ReputationType::Certified, 0.3141, 1.0)};
    CHECK(combine_term_trust(single) == 0.3141);
}

TEST_CASE("combine_term_trust ignores absent values and rejects no evidence") {
    std::vector<ComponentTrust> c = {comp(ReputationType::Interaction, 0.4, 2.0),
                                     ComponentTrust{ReputationType::Witness, std::nullopt, 0.0, 1.0}};
    CHECK(combine_term_trust(c) == 0.4);
    std::vector<ComponentTrust> none = {ComponentTrust{ReputationType::Witness, std::nullopt, 0.0, 1.0}};
    try {
        combine_term_trust(none);
        FAIL("expected NoEvidence");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoEvidence);
    }
    std::vector<ComponentTrust> zero = {comp(ReputationType::Interaction, 0.4, 0.0)};
    CHECK_THROWS_AS(combine_term_trust(zero), Error);
}

TEST_CASE("overall_trust examples") {
    const auto w = qtc(0.45, 0.35, 0.20);
    CHECK(overall_trust(qtc(0.80, 0.5875, 0.375), w) == doctest::Approx(0.640625).epsilon(1e-12));
    // Rounded published term trusts for C give 0.1775; the unrounded inputs give 0.174375.
    CHECK(overall_trust(qtc(0.18, 0.19, 0.15), w) == doctest::Approx(0.1775).epsilon(1e-12));
    CHECK(overall_trust(qtc(0.175, 0.1875, 0.15), w) == doctest::Approx(0.174375).epsilon(1e-12));
    CHECK(overall_trust(qtc(0.3, 0.3, 0.3), qtc(2.0, 5.0, 0.5)) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("overall_trust errors") {
    auto code_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;  // sentinel: nothing thrown
    };
    CHECK(code_of([] { overall_trust({}, {}); }) == ErrorCode::NoTerms);
    CHECK(code_of([] { overall_trust(qtc(0.1, 0.2, 0.3), qtc(0, 0, 0)); }) == ErrorCode::WeightSumZero);
    CHECK(code_of([] {
              overall_trust({{Term("quality"), 0.5}}, {{Term("price"), 1.0}});
          }) == ErrorCode::ConfigError);
}

TEST_CASE("weighted means stay within bounds and ignore weight scale") {
    oracle::Gen g(12);
    for (int i = 0; i < 300; ++i) {
        const int n = g.integer(1, 4);
        std::vector<ComponentTrust> comps;
        std::vector<ComponentTrust> scaled;
        double lo = 1.0, hi = 0.0;
        const double k = g.uniform(0.01, 100.0);
        for (int j = 0; j < n; ++j) {
            const double v = g.uniform();
            const double w = g.uniform(0.01, 1.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            comps.push_back(comp(kAllReputationTypes[j], v, w));
            scaled.push_back(comp(kAllReputationTypes[j], v, w * k));
        }
        const double t = combine_term_trust(comps);
        CHECK(t >= lo - 1e-15);
        CHECK(t <= hi + 1e-15);
        CHECK(std::abs(t - combine_term_trust(scaled)) <= 1e-12);

        std::map<Term, double> trusts, weights, weights_scaled;
        double tlo = 1.0, thi = 0.0;
        for (int j = 0; j < n; ++j) {
            const Term term("t" + std::to_string(j));
            const double v = g.uniform();
            const double w = g.uniform(0.01, 1.0);
            trusts[term] = v;
            weights[term] = w;
            weights_scaled[term] = w * k;
            tlo = std::min(tlo, v);
            thi = std::max(thi, v);
        }
        const double o = overall_trust(trusts, weights);
        CHECK(o >= tlo - 1e-15);
        CHECK(o <= thi + 1e-15);
        CHECK(std::abs(o - overall_trust(trusts, weights_scaled)) <= 1e-12);
    }
}

TEST_CASE("preferences validation") {
    Preferences p = table4::preferences();
    CHECK_NOTHROW(p.validate());
    CHECK(p.terms().front() == Term("quality"));
    CHECK(*p.term_weight(Term("cost")) == 0.20);
    CHECK(p.component_weight(ReputationType::Certified) == 0.0);

    Preferences dup = p;
    dup.term_weights.emplace_back(Term("quality"), 0.1);
    CHECK_THROWS_AS(dup.validate(), Error);

    Preferences no_terms = p;
    for (auto& [t, w] : no_terms.term_weights) w = 0.0;
    CHECK_THROWS_AS(no_terms.validate(), Error);

    Preferences negative = p;
    negative.component_weights[ReputationType::Witness] = -0.1;
    CHECK_THROWS_AS(negative.validate(), Error);

    Preferences no_components = p;
    no_components.component_weights.clear();
    CHECK_THROWS_AS(no_components.validate(), Error);
}

TEST_CASE("running example reproduces every term trust and score") {
    for (const auto& row : table4::rows()) {
        const auto a = table4::assessment(row.provider);
        REQUIRE(a.per_term.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            const double t = a.per_term[i].term_trust;
            // Independent recomputation from the published component values.
            CHECK(std::abs(t - (0.75 * row.interaction[i] + 0.25 * row.witness[i])) <= 1e-12);
            CHECK(table4::round2(t) == table4::round2(row.printed_term_trust[i]));
            CHECK(std::abs(t - row.printed_term_trust[i]) <= 0.005 + 1e-12);
        }
        CHECK(table4::round2(a.overall) == table4::round2(row.printed_overall));
        CHECK(std::abs(a.overall - row.printed_overall) <= 0.005 + 1e-12);
        CHECK_NOTHROW(validate_assessment(a, table4::preferences()));
    }
}

TEST_CASE("validate_assessment catches inconsistent numbers") {
    auto a = table4::assessment("B");
    a.overall += 1e-6;
    CHECK_THROWS_AS(validate_assessment(a, table4::preferences()), Error);
    auto b = table4::assessment("B");
    b.per_term[1].term_trust += 1e-6;
    CHECK_THROWS_AS(validate_assessment(b, table4::preferences()), Error);
}

TEST_CASE("round2 rounds exact halves up") {
    CHECK(table4::round2(0.175) == 0.18);
    CHECK(table4::round2(0.525) == 0.53);
    CHECK(table4::round2(0.174375) == 0.17);
    CHECK(table4::round2(0.5875) == 0.59);
}
