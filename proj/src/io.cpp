#include "reptrace/io.hpp"

#include <algorithm>

namespace reptrace::io {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::SchemaError, path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) schema_error(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(path, std::string("missing field '") + key + "'");
    return *it;
}

const json* optional_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) schema_error(path, "expected a number");
    return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) schema_error(path, "expected an integer");
    return j.get<std::int64_t>();
}

std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) schema_error(path, "expected a string");
    return j.get<std::string>();
}

const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) schema_error(path, "expected an array");
    return j;
}

std::array<double, 4> four(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4) schema_error(path, "expected an array of 4 numbers");
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = number(j[i], path + "[" + std::to_string(i) + "]");
    return out;
}

void check_schema(const json& doc, std::string_view expected) {
    const auto tag = string(field(doc, "schema", "$"), "$.schema");
    if (tag != expected) schema_error("$.schema", "expected '" + std::string(expected) + "'");
}

// Domain constructors throw ConfigError; surface them as schema errors at `path`.
template <class F>
auto at_path(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SchemaError) throw;
        schema_error(path, e.message());
    }
}

json terms_to_json(const Preferences& prefs) {
    json out = json::array();
    for (const auto& [term, w] : prefs.term_weights) out.push_back({{"name", term.name()}, {"weight", w}});
    return out;
}

json components_to_json(const std::map<ReputationType, double>& weights) {
    json out = json::object();
    for (const auto& [type, w] : weights) out[std::string(to_string(type))] = w;
    return out;
}

Preferences preferences_from_json(const json& doc) {
    Preferences prefs;
    const auto& terms = array(field(doc, "terms", "$"), "$.terms");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string path = "$.terms[" + std::to_string(i) + "]";
        Term term = at_path(path, [&] { return Term(string(field(terms[i], "name", path), path + ".name")); });
        prefs.term_weights.emplace_back(std::move(term), number(field(terms[i], "weight", path), path + ".weight"));
    }
    const auto& comps = field(doc, "component_weights", "$");
    if (!comps.is_object()) schema_error("$.component_weights", "expected an object");
    for (const auto& [key, value] : comps.items()) {
        const std::string path = "$.component_weights." + key;
        prefs.component_weights[at_path(path, [&] { return parse_reputation_type(key); })] =
            number(value, path);
    }
    at_path("$", [&] { prefs.validate(); return 0; });
    return prefs;
}

json fire_to_json(const fire::FireConfig& c) {
    return {{"lambda", c.lambda}, {"reliability", c.reliability}};
}

void fire_from_json(const json* j, fire::FireConfig& c) {
    if (!j) return;
    if (const auto* v = optional_field(*j, "lambda")) c.lambda = number(*v, "$.fire.lambda");
    if (const auto* v = optional_field(*j, "reliability")) c.reliability = string(*v, "$.fire.reliability");
}

json travos_to_json(const travos::TravosConfig& c) {
    return {{"epsilon", c.epsilon}, {"confidence_threshold", c.confidence_threshold}, {"bins", c.bins}};
}

void travos_from_json(const json* j, travos::TravosConfig& c) {
    if (!j) return;
    if (const auto* v = optional_field(*j, "epsilon")) c.epsilon = number(*v, "$.travos.epsilon");
    if (const auto* v = optional_field(*j, "confidence_threshold")) {
        c.confidence_threshold = number(*v, "$.travos.confidence_threshold");
    }
    if (const auto* v = optional_field(*j, "bins")) c.bins = static_cast<int>(integer(*v, "$.travos.bins"));
}

std::optional<std::size_t> history_cap_from_json(const json* fire) {
    if (!fire) return std::nullopt;
    const auto* v = optional_field(*fire, "history_cap");
    if (!v) return std::nullopt;
    const auto cap = integer(*v, "$.fire.history_cap");
    if (cap < 1) schema_error("$.fire.history_cap", "must be positive");
    return static_cast<std::size_t>(cap);
}

json phase_to_json(const sim::PhaseParams& p) {
    return {{"days_mu", p.days_mu},         {"days_sigma", p.days_sigma},
            {"max_days", p.max_days},       {"price", p.price},
            {"parcel_probs", p.parcel_probs}, {"service_probs", p.service_probs}};
}

sim::PhaseParams phase_from_json(const json& j, const std::string& path) {
    sim::PhaseParams p;
    p.days_mu = number(field(j, "days_mu", path), path + ".days_mu");
    p.days_sigma = number(field(j, "days_sigma", path), path + ".days_sigma");
    p.max_days = static_cast<int>(integer(field(j, "max_days", path), path + ".max_days"));
    p.price = number(field(j, "price", path), path + ".price");
    p.parcel_probs = four(field(j, "parcel_probs", path), path + ".parcel_probs");
    p.service_probs = four(field(j, "service_probs", path), path + ".service_probs");
    return p;
}

json observation_to_json(const ObservationRecord& o) {
    return {{"assessor", o.assessor.str()}, {"witness", o.witness.str()},
            {"target", o.target.str()},     {"term", o.term.name()},
            {"interaction_id", o.interaction_id}, {"opinion_value", o.opinion_value},
            {"outcome_rating", o.outcome_rating}};
}

ObservationRecord observation_from_json(const json& j, const std::string& path) {
    return at_path(path, [&] {
        return ObservationRecord{AgentId(string(field(j, "assessor", path), path + ".assessor")),
                                 AgentId(string(field(j, "witness", path), path + ".witness")),
                                 AgentId(string(field(j, "target", path), path + ".target")),
                                 Term(string(field(j, "term", path), path + ".term")),
                                 string(field(j, "interaction_id", path), path + ".interaction_id"),
                                 number(field(j, "opinion_value", path), path + ".opinion_value"),
                                 number(field(j, "outcome_rating", path), path + ".outcome_rating")};
    });
}

std::vector<std::string> names(const std::vector<Term>& terms) {
    std::vector<std::string> out;
    for (const auto& t : terms) out.push_back(t.name());
    return out;
}

std::vector<Term> terms_from(const json& j, const std::string& path) {
    std::vector<Term> out;
    const auto& arr = array(j, path);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        out.push_back(at_path(p, [&] { return Term(string(arr[i], p)); }));
    }
    return out;
}

}  // namespace

const sim::AgentStores* StoresDocument::find(const AgentId& agent) const {
    for (const auto& a : agents) {
        if (a.agent == agent) return &a;
    }
    return nullptr;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SchemaError, std::string("malformed JSON: ") + e.what());
    }
}

sim::Scenario scenario_from_json(const json& doc) {
    check_schema(doc, kScenarioSchema);
    sim::Scenario s;
    s.seed = static_cast<std::uint64_t>(integer(field(doc, "seed", "$"), "$.seed"));
    s.rounds = static_cast<int>(integer(field(doc, "rounds", "$"), "$.rounds"));
    if (const auto* v = optional_field(doc, "selection")) {
        const auto sel = string(*v, "$.selection");
        if (sel == "uniform") s.selection = sim::SelectionPolicy::UniformRandom;
        else if (sel == "round_robin") s.selection = sim::SelectionPolicy::RoundRobin;
        else schema_error("$.selection", "expected 'uniform' or 'round_robin'");
    }
    s.preferences = preferences_from_json(doc);
    if (const auto* v = optional_field(doc, "model")) {
        s.model = at_path("$.model", [&] { return explain::parse_model(string(*v, "$.model")); });
    }
    const auto* fire_json = optional_field(doc, "fire");
    fire_from_json(fire_json, s.fire);
    s.fire.importance = s.preferences.component_weights;
    s.history_cap = history_cap_from_json(fire_json);
    travos_from_json(optional_field(doc, "travos"), s.travos);
    if (const auto* p = optional_field(doc, "profile")) {
        if (const auto* v = optional_field(*p, "parcel_scores")) s.profile.parcel_scores = four(*v, "$.profile.parcel_scores");
        if (const auto* v = optional_field(*p, "service_scores")) s.profile.service_scores = four(*v, "$.profile.service_scores");
        if (const auto* v = optional_field(*p, "price_ceiling")) s.profile.price_ceiling = number(*v, "$.profile.price_ceiling");
    }
    const auto& providers = array(field(doc, "providers", "$"), "$.providers");
    for (std::size_t i = 0; i < providers.size(); ++i) {
        const std::string path = "$.providers[" + std::to_string(i) + "]";
        const auto& phases = array(field(providers[i], "phases", path), path + ".phases");
        if (phases.size() != 2) schema_error(path + ".phases", "expected exactly 2 phases");
        s.providers.push_back(at_path(path, [&] {
            return sim::ProviderModel{AgentId(string(field(providers[i], "id", path), path + ".id")),
                                      {phase_from_json(phases[0], path + ".phases[0]"),
                                       phase_from_json(phases[1], path + ".phases[1]")}};
        }));
    }
    const auto& agents = array(field(doc, "agents", "$"), "$.agents");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string path = "$.agents[" + std::to_string(i) + "]";
        sim::AgentSpec spec{at_path(path, [&] { return AgentId(string(field(agents[i], "id", path), path + ".id")); }), {}};
        if (const auto* w = optional_field(agents[i], "witnesses")) {
            for (std::size_t k = 0; k < array(*w, path + ".witnesses").size(); ++k) {
                const std::string wp = path + ".witnesses[" + std::to_string(k) + "]";
                spec.witnesses.push_back(at_path(wp, [&] { return AgentId(string((*w)[k], wp)); }));
            }
        }
        s.agents.push_back(std::move(spec));
    }
    at_path("$", [&] { s.validate(); return 0; });
    return s;
}

json scenario_to_json(const sim::Scenario& s) {
    json providers = json::array();
    for (const auto& p : s.providers) {
        providers.push_back({{"id", p.id.str()},
                             {"phases", {phase_to_json(p.phases[0]), phase_to_json(p.phases[1])}}});
    }
    json agents = json::array();
    for (const auto& a : s.agents) {
        json w = json::array();
        for (const auto& id : a.witnesses) w.push_back(id.str());
        agents.push_back({{"id", a.id.str()}, {"witnesses", w}});
    }
    json fire = fire_to_json(s.fire);
    fire["history_cap"] = s.history_cap ? json(*s.history_cap) : json(nullptr);
    return {{"schema", kScenarioSchema},
            {"seed", s.seed},
            {"rounds", s.rounds},
            {"selection", s.selection == sim::SelectionPolicy::RoundRobin ? "round_robin" : "uniform"},
            {"model", explain::to_string(s.model)},
            {"terms", terms_to_json(s.preferences)},
            {"component_weights", components_to_json(s.preferences.component_weights)},
            {"fire", fire},
            {"travos", travos_to_json(s.travos)},
            {"profile",
             {{"parcel_scores", s.profile.parcel_scores},
              {"service_scores", s.profile.service_scores},
              {"price_ceiling", s.profile.price_ceiling}}},
            {"providers", providers},
            {"agents", agents}};
}

json rating_to_json(const Rating& r) {
    return {{"source", r.source.str()},
            {"target", r.target.str()},
            {"term", r.term.name()},
            {"rep_type", to_string(r.rep_type)},
            {"value", r.value},
            {"raw_value", r.raw_value},
            {"timestamp", r.timestamp},
            {"interaction_id", r.interaction_id ? json(*r.interaction_id) : json(nullptr)}};
}

Rating rating_from_json(const json& j, const std::string& path) {
    return at_path(path, [&] {
        Rating r{AgentId(string(field(j, "source", path), path + ".source")),
                 AgentId(string(field(j, "target", path), path + ".target")),
                 Term(string(field(j, "term", path), path + ".term")),
                 parse_reputation_type(string(field(j, "rep_type", path), path + ".rep_type")),
                 number(field(j, "value", path), path + ".value"),
                 number(field(j, "raw_value", path), path + ".raw_value"),
                 0,
                 std::nullopt};
        const auto ts = integer(field(j, "timestamp", path), path + ".timestamp");
        if (ts < 0) schema_error(path + ".timestamp", "must be non-negative");
        r.timestamp = static_cast<std::uint64_t>(ts);
        if (const auto* iid = optional_field(j, "interaction_id")) r.interaction_id = string(*iid, path + ".interaction_id");
        if (!(r.value >= 0.0 && r.value <= 1.0)) schema_error(path + ".value", "must lie in [0,1]");
        return r;
    });
}

StoresDocument make_stores_document(const sim::Scenario& scenario, sim::SimulationResult result) {
    StoresDocument doc;
    doc.preferences = scenario.preferences;
    doc.model = scenario.model;
    doc.fire = scenario.fire;
    doc.history_cap = scenario.history_cap;
    doc.travos = scenario.travos;
    doc.now = result.now;
    for (const auto& p : scenario.providers) doc.providers.push_back(p.id);
    doc.agents = std::move(result.agents);
    return doc;
}

json stores_to_json(const StoresDocument& doc) {
    json agents = json::array();
    for (const auto& a : doc.agents) {
        json ratings = json::array();
        for (const auto& r : a.ratings.records()) ratings.push_back(rating_to_json(r));
        json observations = json::array();
        for (const auto& o : a.observations.records()) observations.push_back(observation_to_json(o));
        agents.push_back({{"id", a.agent.str()}, {"ratings", ratings}, {"observations", observations}});
    }
    json providers = json::array();
    for (const auto& p : doc.providers) providers.push_back(p.str());
    json roles = json::object();
    for (const auto& [agent, held] : doc.roles.roles()) roles[agent.str()] = held;
    json rules = json::array();
    for (const auto& r : doc.roles.rules()) {
        rules.push_back({{"role_a", r.role_a}, {"role_b", r.role_b}, {"term", r.term.name()},
                         {"likelihood", r.likelihood}, {"expected_value", r.expected_value}});
    }
    json fire = fire_to_json(doc.fire);
    fire["history_cap"] = doc.history_cap ? json(*doc.history_cap) : json(nullptr);
    return {{"schema", kStoresSchema},
            {"model", explain::to_string(doc.model)},
            {"now", doc.now},
            {"terms", terms_to_json(doc.preferences)},
            {"component_weights", components_to_json(doc.preferences.component_weights)},
            {"fire", fire},
            {"travos", travos_to_json(doc.travos)},
            {"providers", providers},
            {"agents", agents},
            {"roles", roles},
            {"role_rules", rules}};
}

StoresDocument stores_from_json(const json& doc) {
    check_schema(doc, kStoresSchema);
    StoresDocument out;
    out.preferences = preferences_from_json(doc);
    if (const auto* v = optional_field(doc, "model")) {
        out.model = at_path("$.model", [&] { return explain::parse_model(string(*v, "$.model")); });
    }
    const auto now = integer(field(doc, "now", "$"), "$.now");
    if (now < 0) schema_error("$.now", "must be non-negative");
    out.now = static_cast<std::uint64_t>(now);
    const auto* fire_json = optional_field(doc, "fire");
    fire_from_json(fire_json, out.fire);
    out.fire.importance = out.preferences.component_weights;
    out.history_cap = history_cap_from_json(fire_json);
    travos_from_json(optional_field(doc, "travos"), out.travos);
    at_path("$.fire", [&] { out.fire.validate(); return 0; });
    at_path("$.travos", [&] { out.travos.validate(); return 0; });

    const auto& providers = array(field(doc, "providers", "$"), "$.providers");
    for (std::size_t i = 0; i < providers.size(); ++i) {
        const std::string path = "$.providers[" + std::to_string(i) + "]";
        out.providers.push_back(at_path(path, [&] { return AgentId(string(providers[i], path)); }));
    }
    const auto& agents = array(field(doc, "agents", "$"), "$.agents");
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string path = "$.agents[" + std::to_string(i) + "]";
        AgentId id = at_path(path, [&] { return AgentId(string(field(agents[i], "id", path), path + ".id")); });
        sim::AgentStores stores{id, RatingStore(out.history_cap, id), ObservationStore{}};
        const auto& ratings = array(field(agents[i], "ratings", path), path + ".ratings");
        for (std::size_t k = 0; k < ratings.size(); ++k) {
            stores.ratings.insert(rating_from_json(ratings[k], path + ".ratings[" + std::to_string(k) + "]"));
        }
        if (const auto* obs = optional_field(agents[i], "observations")) {
            for (std::size_t k = 0; k < array(*obs, path + ".observations").size(); ++k) {
                const std::string op = path + ".observations[" + std::to_string(k) + "]";
                auto record = observation_from_json((*obs)[k], op);
                at_path(op, [&] { stores.observations.insert(std::move(record)); return 0; });
            }
        }
        out.agents.push_back(std::move(stores));
    }
    if (const auto* roles = optional_field(doc, "roles")) {
        if (!roles->is_object()) schema_error("$.roles", "expected an object");
        for (const auto& [agent, held] : roles->items()) {
            const std::string path = "$.roles." + agent;
            for (std::size_t k = 0; k < array(held, path).size(); ++k) {
                at_path(path, [&] { out.roles.assign_role(AgentId(agent), string(held[k], path)); return 0; });
            }
        }
    }
    if (const auto* rules = optional_field(doc, "role_rules")) {
        for (std::size_t k = 0; k < array(*rules, "$.role_rules").size(); ++k) {
            const std::string path = "$.role_rules[" + std::to_string(k) + "]";
            const auto& r = (*rules)[k];
            at_path(path, [&] {
                out.roles.add_rule(RoleRule{string(field(r, "role_a", path), path + ".role_a"),
                                            string(field(r, "role_b", path), path + ".role_b"),
                                            Term(string(field(r, "term", path), path + ".term")),
                                            number(field(r, "likelihood", path), path + ".likelihood"),
                                            number(field(r, "expected_value", path), path + ".expected_value")});
                return 0;
            });
        }
    }
    return out;
}

json assessment_to_json(const Assessment& a) {
    json terms = json::array();
    for (const auto& t : a.per_term) {
        json comps = json::array();
        for (const auto& c : t.components) {
            comps.push_back({{"rep_type", to_string(c.rep_type)},
                             {"value", c.value ? json(*c.value) : json(nullptr)},
                             {"weight", c.weight},
                             {"reliability", c.reliability}});
        }
        terms.push_back({{"term", t.term.name()}, {"components", comps}, {"term_trust", t.term_trust}});
    }
    return {{"assessor", a.assessor.str()}, {"target", a.target.str()}, {"terms", terms},
            {"overall", a.overall}};
}

json explanation_to_json(const explain::Explanation& e) {
    json args = json::array();
    for (const auto& argument : e.arguments) {
        json a = {{"kind", explain::kind_name(argument)}};
        if (const auto* d = std::get_if<explain::DecisiveDominance>(&argument)) {
            a["pros"] = names(d->pros);
            a["reference"] = d->reference;
        } else if (const auto* d = std::get_if<explain::DecisiveTradeoff>(&argument)) {
            a["pros"] = names(d->pros);
            a["cons"] = names(d->cons);
        } else if (const auto* p = std::get_if<explain::TypePermutation>(&argument)) {
            a["term"] = p->term.name();
            json swaps = json::array();
            for (const auto& s : p->swaps) {
                swaps.push_back({{"less_important", to_string(s.less_important)},
                                 {"more_important", to_string(s.more_important)}});
            }
            a["swaps"] = swaps;
            a["preferred_trust"] = p->preferred_trust;
            a["other_trust"] = p->other_trust;
        } else if (const auto* f = std::get_if<explain::FireRecencyLocal>(&argument)) {
            a["term"] = f->term.name();
            a["rep_type"] = to_string(f->rep_type);
        } else if (const auto* c = std::get_if<explain::TravosLowConfidence>(&argument)) {
            a["term"] = c->term.name();
        }
        args.push_back(std::move(a));
    }
    return {{"schema", kExplanationSchema},
            {"model", explain::to_string(e.model)},
            {"assessor", e.assessor.str()},
            {"preferred", e.preferred.str()},
            {"other", e.other.str()},
            {"arguments", args}};
}

explain::Explanation explanation_from_json(const json& doc) {
    check_schema(doc, kExplanationSchema);
    return at_path("$", [&] {
        explain::Explanation e{AgentId(string(field(doc, "assessor", "$"), "$.assessor")),
                               AgentId(string(field(doc, "preferred", "$"), "$.preferred")),
                               AgentId(string(field(doc, "other", "$"), "$.other")),
                               explain::parse_model(string(field(doc, "model", "$"), "$.model")),
                               {}};
        const auto& args = array(field(doc, "arguments", "$"), "$.arguments");
        for (std::size_t i = 0; i < args.size(); ++i) {
            const std::string path = "$.arguments[" + std::to_string(i) + "]";
            const auto& a = args[i];
            const auto kind = string(field(a, "kind", path), path + ".kind");
            if (kind == "decisive_dominance") {
                e.arguments.emplace_back(explain::DecisiveDominance{
                    terms_from(field(a, "pros", path), path + ".pros"),
                    number(field(a, "reference", path), path + ".reference")});
            } else if (kind == "decisive_tradeoff") {
                e.arguments.emplace_back(explain::DecisiveTradeoff{
                    terms_from(field(a, "pros", path), path + ".pros"),
                    terms_from(field(a, "cons", path), path + ".cons")});
            } else if (kind == "type_permutation") {
                explain::TypePermutation p{Term(string(field(a, "term", path), path + ".term")), {},
                                           number(field(a, "preferred_trust", path), path + ".preferred_trust"),
                                           number(field(a, "other_trust", path), path + ".other_trust")};
                const auto& swaps = array(field(a, "swaps", path), path + ".swaps");
                for (std::size_t k = 0; k < swaps.size(); ++k) {
                    const std::string sp = path + ".swaps[" + std::to_string(k) + "]";
                    p.swaps.push_back(explain::TypeSwap{
                        parse_reputation_type(string(field(swaps[k], "less_important", sp), sp)),
                        parse_reputation_type(string(field(swaps[k], "more_important", sp), sp))});
                }
                if (p.swaps.empty()) schema_error(path + ".swaps", "must be non-empty");
                e.arguments.emplace_back(std::move(p));
            } else if (kind == "fire_recency_global") {
                e.arguments.emplace_back(explain::FireRecencyGlobal{});
            } else if (kind == "fire_recency_local") {
                e.arguments.emplace_back(explain::FireRecencyLocal{
                    Term(string(field(a, "term", path), path + ".term")),
                    parse_reputation_type(string(field(a, "rep_type", path), path + ".rep_type"))});
            } else if (kind == "travos_low_confidence") {
                e.arguments.emplace_back(
                    explain::TravosLowConfidence{Term(string(field(a, "term", path), path + ".term"))});
            } else {
                schema_error(path + ".kind", "unknown argument kind '" + kind + "'");
            }
        }
        return e;
    });
}

}  // namespace reptrace::io
