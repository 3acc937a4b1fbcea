#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "oracles.hpp"
#include "reptrace/store.hpp"

using namespace reptrace;

namespace {

Rating rate(const std::string& src, const std::string& tgt, const std::string& term, ReputationType type,
            double v, std::uint64_t ts, std::optional<std::string> iid = std::nullopt) {
    return make_rating(AgentId(src), AgentId(tgt), Term(term), type, v, NativeRange::unit(), ts, std::move(iid));
}

constexpr auto I = ReputationType::Interaction;
constexpr auto W = ReputationType::Witness;

}  // namespace

TEST_CASE("history cap evicts the oldest record of the same source") {
    RatingStore s(2);
    s.insert(rate("a", "b", "q", I, 0.1, 5));
    s.insert(rate("a", "b", "q", I, 0.2, 3));
    s.insert(rate("a", "b", "q", I, 0.3, 9));
    REQUIRE(s.size() == 2);
    for (const auto& r : s.records()) CHECK(r.timestamp != 3);
}

TEST_CASE("history cap breaks timestamp ties by insertion order") {
    RatingStore s(2);
    s.insert(rate("a", "b", "q", I, 0.1, 4));
    s.insert(rate("a", "b", "q", I, 0.2, 4));
    s.insert(rate("a", "b", "q", I, 0.3, 4));
    REQUIRE(s.size() == 2);
    CHECK(s.records()[0].value == 0.2);
    CHECK(s.records()[1].value == 0.3);
}

TEST_CASE("no cap retains everything; cap is per source") {
    RatingStore unbounded;
    for (int i = 0; i < 50; ++i) unbounded.insert(rate("a", "b", "q", I, 0.5, i));
    CHECK(unbounded.size() == 50);

    RatingStore s(2);
    for (int i = 0; i < 2; ++i) {
        s.insert(rate("a", "b", "q", I, 0.5, i));
        s.insert(rate("c", "b", "q", I, 0.5, i));
    }
    CHECK(s.size() == 4);
}

TEST_CASE("an owned store caps only the owner's own ratings") {
    RatingStore s(1, AgentId("a"));
    s.insert(rate("a", "b", "q", I, 0.1, 1));
    s.insert(rate("a", "b", "q", I, 0.2, 2));
    for (int i = 0; i < 5; ++i) s.insert(rate("w", "b", "q", W, 0.5, i));
    CHECK(s.query({AgentId("a"), {}, {}, {}, {}}).size() == 1);
    CHECK(s.query({AgentId("a"), {}, {}, {}, {}}).front().value == 0.2);
    CHECK(s.query({AgentId("w"), {}, {}, {}, {}}).size() == 5);
    CHECK_THROWS_AS(RatingStore(0), Error);
}

TEST_CASE("eviction never removes one of the H most recent records") {
    oracle::Gen g(21);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t cap = static_cast<std::size_t>(g.integer(1, 5));
        RatingStore s(cap);
        std::map<std::string, std::vector<std::uint64_t>> inserted;
        for (int i = 0; i < 30; ++i) {
            const std::string src = "s" + std::to_string(g.integer(0, 2));
            const auto ts = static_cast<std::uint64_t>(g.integer(0, 20));
            inserted[src].push_back(ts);
            s.insert(rate(src, "b", "q", I, g.grid(10), ts));
        }
        for (auto& [src, stamps] : inserted) {
            std::sort(stamps.rbegin(), stamps.rend());
            const auto kept = s.query({AgentId(src), {}, {}, {}, {}});
            CHECK(kept.size() == std::min(cap, stamps.size()));
            // The kept timestamps are exactly the cap largest ones (as a multiset).
            std::vector<std::uint64_t> kept_ts;
            for (const auto& r : kept) kept_ts.push_back(r.timestamp);
            std::sort(kept_ts.rbegin(), kept_ts.rend());
            stamps.resize(kept.size());
            CHECK(kept_ts == stamps);
        }
    }
}

TEST_CASE("query filters by pattern and sorts by timestamp") {
    RatingStore s;
    s.insert(rate("a", "b", "q", I, 0.9, 7));
    s.insert(rate("a", "b", "t", I, 0.8, 1));
    s.insert(rate("x", "b", "q", W, 0.7, 3));
    s.insert(rate("a", "c", "q", I, 0.6, 2));
    s.insert(rate("a", "b", "q", I, 0.5, 0, "a@0"));

    const auto own = s.query({AgentId("a"), AgentId("b"), Term("q"), {}, {}});
    REQUIRE(own.size() == 2);
    CHECK(own[0].timestamp == 0);
    CHECK(own[1].timestamp == 7);

    const auto any_source = s.query({{}, AgentId("b"), Term("q"), {}, {}});
    CHECK(any_source.size() == 3);
    for (std::size_t i = 1; i < any_source.size(); ++i) {
        CHECK(any_source[i - 1].timestamp <= any_source[i].timestamp);
    }

    CHECK(s.query({}).size() == s.size());
    CHECK(s.query({{}, {}, {}, {}, std::string("a@0")}).size() == 1);
    CHECK(s.query({{}, {}, {}, W, {}}).size() == 1);
}

TEST_CASE("query results do not depend on insertion interleaving") {
    oracle::Gen g(22);
    std::vector<Rating> pool;
    for (int i = 0; i < 40; ++i) {
        pool.push_back(rate("s" + std::to_string(g.integer(0, 3)), "b" + std::to_string(g.integer(0, 2)),
                            g.coin() ? "q" : "t", g.coin() ? I : W, g.grid(4), g.integer(0, 5)));
    }
    RatingStore forward;
    for (const auto& r : pool) forward.insert(r);
    std::mt19937 shuffler(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto shuffled = pool;
        std::shuffle(shuffled.begin(), shuffled.end(), shuffler);
        RatingStore other;
        for (const auto& r : shuffled) other.insert(r);
        const RatingPattern patterns[] = {{}, {{}, AgentId("b1"), Term("q"), {}, {}}, {AgentId("s2"), {}, {}, W, {}}};
        for (const auto& p : patterns) {
            const auto a = forward.query(p);
            const auto b = other.query(p);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(a[i].source == b[i].source);
                CHECK(a[i].target == b[i].target);
                CHECK(a[i].timestamp == b[i].timestamp);
                CHECK(a[i].value == b[i].value);
            }
        }
    }
}

TEST_CASE("tab-separated persistence round-trips") {
    RatingStore s;
    s.insert(rate("a", "b", "quality", I, 0.25, 3, "a@3"));
    s.insert(make_rating(AgentId("w"), AgentId("b"), Term("quality"), W, -0.5, NativeRange::fire(), 4));
    std::stringstream buf;
    s.save_tsv(buf);
    const std::string text = buf.str();
    CHECK(text.rfind("#source\ttarget\tterm\trep_type\tvalue\traw_value\ttimestamp\tinteraction_id\n", 0) == 0);
    const auto loaded = RatingStore::load_tsv(buf);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded.records()[0].interaction_id == std::optional<std::string>("a@3"));
    CHECK(loaded.records()[1].value == 0.25);
    CHECK(loaded.records()[1].raw_value == -0.5);
    CHECK(!loaded.records()[1].interaction_id);

    std::stringstream bad("#header\na\tb\n");
    CHECK_THROWS_AS(RatingStore::load_tsv(bad), Error);
}

TEST_CASE("opinion bins are half-open with the last bin closed") {
    CHECK(opinion_bin(0.65, 5) == 4);
    CHECK(opinion_bin(0.6, 5) == 4);
    CHECK(opinion_bin(0.8, 5) == 5);
    CHECK(opinion_bin(1.0, 5) == 5);
    CHECK(opinion_bin(0.0, 5) == 1);
    CHECK(opinion_bin(0.19999, 5) == 1);
    CHECK_THROWS_AS(opinion_bin(1.2, 5), Error);
    CHECK_THROWS_AS(opinion_bin(0.5, 0), Error);
}

TEST_CASE("observation queries filter by assessor, witness, term and bin") {
    ObservationStore obs;
    CHECK(obs.query(AgentId("a"), AgentId("w"), Term("q"), 4, 5).empty());
    const double opinions[] = {0.61, 0.79, 0.8, 0.59, 1.0};
    int k = 0;
    for (double o : opinions) {
        obs.insert({AgentId("a"), AgentId("w"), AgentId("b"), Term("q"), "a@" + std::to_string(k++), o, 1.0});
    }
    obs.insert({AgentId("a"), AgentId("v"), AgentId("b"), Term("q"), "a@9", 0.7, 1.0});
    obs.insert({AgentId("z"), AgentId("w"), AgentId("b"), Term("q"), "z@0", 0.7, 1.0});
    obs.insert({AgentId("a"), AgentId("w"), AgentId("b"), Term("t"), "a@8", 0.7, 1.0});

    const auto bin4 = obs.query(AgentId("a"), AgentId("w"), Term("q"), 4, 5);
    REQUIRE(bin4.size() == 2);
    for (const auto& r : bin4) CHECK((r.opinion_value >= 0.6 && r.opinion_value < 0.8));
    CHECK(obs.query(AgentId("a"), AgentId("w"), Term("q"), 5, 5).size() == 2);
    try {
        obs.query(AgentId("a"), AgentId("w"), Term("q"), 6, 5);
        FAIL("expected BadBin");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadBin);
    }
    CHECK_THROWS_AS(obs.query(AgentId("a"), AgentId("w"), Term("q"), 0, 5), Error);
    CHECK_THROWS_AS(obs.insert({AgentId("a"), AgentId("w"), AgentId("b"), Term("q"), "x", 1.5, 1.0}), Error);
}

TEST_CASE("role rules match on the roles both agents hold") {
    RoleRuleStore roles;
    roles.assign_role(AgentId("a"), "buyer");
    roles.assign_role(AgentId("b"), "courier");
    roles.add_rule({"buyer", "courier", Term("q"), 0.8, 0.5});
    roles.add_rule({"buyer", "courier", Term("t"), 0.8, 0.5});
    roles.add_rule({"seller", "courier", Term("q"), 0.8, 0.5});
    CHECK(roles.matching(AgentId("a"), AgentId("b"), Term("q")).size() == 1);
    CHECK(roles.matching(AgentId("b"), AgentId("a"), Term("q")).empty());
    CHECK_THROWS_AS(roles.add_rule({"x", "y", Term("q"), 1.5, 0.0}), Error);
}
