#include "reptrace/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "reptrace/pipeline.hpp"
#include "reptrace/render.hpp"
#include "reptrace/table4.hpp"

namespace reptrace::cli {

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::SchemaError:
        case ErrorCode::ConfigError:
        case ErrorCode::UnknownAgent:
        case ErrorCode::OutOfRange:
        case ErrorCode::BadBin:
        case ErrorCode::NonBinaryRating:
            return kExitUsage;
        case ErrorCode::IoError: return kExitIo;
        case ErrorCode::NotPreferred:
        case ErrorCode::AmbiguousOrder:
            return kExitOrder;
        default: return kExitFailure;
    }
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::IoError, "failed reading '" + path + "'");
    return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    f << text;
    f.flush();
    if (!f) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

std::string dump(const io::json& j) { return j.dump(2) + "\n"; }

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

explain::Model model_or(const std::string& flag, explain::Model fallback) {
    return flag.empty() ? fallback : explain::parse_model(flag);
}

explain::ProsOrder parse_pros_order(const std::string& s) {
    if (s == "descending") return explain::ProsOrder::Descending;
    if (s == "ascending") return explain::ProsOrder::Ascending;
    throw Error(ErrorCode::ConfigError, "pros order must be 'descending' or 'ascending'");
}

render::TemplateSet load_templates(const std::string& path) {
    if (path.empty()) return render::TemplateSet::defaults();
    std::istringstream in(read_file(path));
    return render::TemplateSet::parse(in);
}

std::map<AgentId, std::string> display_names(const explain::Explanation& e,
                                             const std::vector<std::string>& overrides) {
    std::map<AgentId, std::string> names = {{e.preferred, e.preferred.str()}, {e.other, e.other.str()}};
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error(ErrorCode::ConfigError, "--name expects ID=DISPLAY, got '" + o + "'");
        }
        names[AgentId(o.substr(0, eq))] = o.substr(eq + 1);
    }
    return names;
}

std::optional<std::uint64_t> seed_from_env() {
    const char* env = std::getenv("REPTRACE_SEED");
    if (!env || !*env) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-') {
        throw Error(ErrorCode::ConfigError, std::string("REPTRACE_SEED is not an unsigned integer: ") + env);
    }
    return static_cast<std::uint64_t>(v);
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path, std::ostream& out) {
    auto scenario = io::scenario_from_json(io::parse_json(read_file(scenario_path)));
    if (auto seed = seed_from_env()) scenario.seed = *seed;
    auto result = sim::run_scenario(scenario);
    const auto doc = io::make_stores_document(scenario, std::move(result));
    write_output(out_path, dump(io::stores_to_json(doc)), out);
    return kExitOk;
}

int cmd_assess(const std::string& stores_path, const std::string& model_flag, const std::string& assessor,
               std::ostream& out) {
    const auto doc = io::stores_from_json(io::parse_json(read_file(stores_path)));
    const auto model = model_or(model_flag, doc.model);
    out << dump(pipeline::ranking_to_json(pipeline::rank_providers(doc, model, AgentId(assessor))));
    return kExitOk;
}

struct ExplainFlags {
    std::string stores;
    std::string model;
    std::string assessor;
    std::string preferred;
    std::string other;
    bool text = false;
    std::string pros_order = "descending";
    std::string templates;
    std::vector<std::string> names;
};

int cmd_explain(const ExplainFlags& f, std::ostream& out) {
    const auto doc = io::stores_from_json(io::parse_json(read_file(f.stores)));
    const auto model = model_or(f.model, doc.model);
    const explain::ExplainOptions options{parse_pros_order(f.pros_order)};
    const auto templates = load_templates(f.templates);
    const auto ctx = pipeline::build_context(doc, model, AgentId(f.assessor), AgentId(f.preferred),
                                             AgentId(f.other));
    const auto e = [&] {
        try {
            return explain::explain(ctx, options);
        } catch (const Error& ex) {
            if (ex.code() != ErrorCode::NotPreferred && ex.code() != ErrorCode::AmbiguousOrder) throw;
            throw Error(ex.code(), ex.message() + " (" + f.preferred + ": " +
                                       std::to_string(ctx.preferred.overall) + ", " + f.other + ": " +
                                       std::to_string(ctx.other.overall) + ")");
        }
    }();
    if (f.text) {
        out << render::render_text(e, display_names(e, f.names), templates) << "\n";
    } else {
        out << dump(io::explanation_to_json(e));
    }
    return kExitOk;
}

int cmd_render(const std::string& path, const std::string& templates_path,
               const std::vector<std::string>& names, std::ostream& out) {
    const auto e = io::explanation_from_json(io::parse_json(read_file(path)));
    out << render::render_text(e, display_names(e, names), load_templates(templates_path)) << "\n";
    return kExitOk;
}

int cmd_demo(const std::string& emit_stores, std::ostream& out, std::ostream& err) {
    std::vector<std::string> mismatches;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) mismatches.push_back(what);
    };

    out << "Running example, assessor " << table4::kAssessor << "\n";
    out << "          interaction         witness             term trust          score\n";
    out << "          Q     T     Ct      Q     T     Ct      Q     T     Ct\n";
    for (const auto& r : table4::rows()) {
        const auto a = table4::assessment(r.provider);
        std::string line = r.provider;
        line.resize(10, ' ');
        auto cell = [&](double v) { line += fmt2(table4::round2(v)) + "  "; };
        for (double v : r.interaction) cell(v);
        line += "  ";
        for (double v : r.witness) cell(v);
        line += "  ";
        for (std::size_t i = 0; i < 3; ++i) {
            const double t = a.per_term[i].term_trust;
            cell(t);
            expect(std::abs(t - r.term_trust[i]) <= 1e-9 &&
                       table4::round2(t) == table4::round2(r.printed_term_trust[i]),
                   r.provider + " " + table4::terms()[i].name() + " term trust " + fmt2(t));
        }
        line += "  " + fmt2(table4::round2(a.overall));
        expect(std::abs(a.overall - r.overall) <= 1e-9 &&
                   table4::round2(a.overall) == table4::round2(r.printed_overall),
               r.provider + " trust score " + fmt2(a.overall));
        out << line << "\n";
    }

    const explain::ExplainOptions literal{explain::ProsOrder::Ascending};
    const auto ex1 = render::render_text(explain::explain(table4::context("B", "C"), literal));
    const auto ex2 = render::render_text(explain::explain(table4::context("B", "D"), literal));
    const auto perm = explain::invert_permutation(table4::context("B", "E"), Term("timeliness"));
    std::string ex3 = "(no permutation found)";
    if (perm) {
        const explain::Explanation e3{AgentId("A"), AgentId("B"), AgentId("E"), explain::Model::Fire, {*perm}};
        ex3 = render::render_text(e3);
    }
    out << "\nExample 1 (B vs C)\n" << ex1 << "\n";
    out << "\nExample 2 (B vs D)\n" << ex2 << "\n";
    out << "\nExample 3 (B vs E, timeliness)\n" << ex3 << "\n";
    if (perm) {
        out << "Swapped timeliness trust: B " << fmt2(table4::round2(perm->preferred_trust)) << ", E "
            << fmt2(table4::round2(perm->other_trust)) << "\n";
    }
    expect(ex1 == table4::kExample1Text, "Example 1 text");
    expect(ex2 == table4::kExample2Text, "Example 2 text");
    expect(ex3 == table4::kExample3Text, "Example 3 text");
    expect(perm && perm->swaps.size() == 1 && table4::round2(perm->preferred_trust) == 0.66 &&
               table4::round2(perm->other_trust) == 0.80,
           "Example 3 swapped trusts");

    if (!emit_stores.empty()) write_output(emit_stores, dump(io::stores_to_json(table4::stores())), out);

    if (!mismatches.empty()) {
        for (const auto& m : mismatches) err << "golden mismatch: " << m << "\n";
        return kExitGolden;
    }
    out << "\ngolden check: ok\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Explainable multi-term reputation: simulate, assess, explain", "reptrace"};
    app.require_subcommand(1);

    std::string scenario_path, out_path;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write the resulting stores");
    simulate->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    simulate->add_option("-o,--out", out_path, "Output stores file ('-' for stdout)");

    std::string stores_path, model_flag, assessor;
    auto* assess = app.add_subcommand("assess", "Rank providers for an assessor");
    assess->add_option("stores", stores_path, "Stores JSON file")->required();
    assess->add_option("--model", model_flag, "fire or travos (default: the document's model)");
    assess->add_option("--assessor", assessor, "Assessing agent")->required();

    ExplainFlags ef;
    auto* expl = app.add_subcommand("explain", "Explain why one provider outranks another");
    expl->add_option("stores", ef.stores, "Stores JSON file")->required();
    expl->add_option("--model", ef.model, "fire or travos (default: the document's model)");
    expl->add_option("--assessor", ef.assessor, "Assessing agent")->required();
    expl->add_option("--preferred", ef.preferred, "Provider expected to rank higher")->required();
    expl->add_option("--other", ef.other, "Provider expected to rank lower")->required();
    expl->add_flag("--text", ef.text, "Render text instead of JSON");
    expl->add_option("--pros-order", ef.pros_order, "descending (default) or ascending");
    expl->add_option("--templates", ef.templates, "Template file");
    expl->add_option("--name", ef.names, "Display name, ID=DISPLAY (repeatable)");

    std::string explanation_path, render_templates;
    std::vector<std::string> render_names;
    auto* rend = app.add_subcommand("render", "Render a saved explanation document as text");
    rend->add_option("explanation", explanation_path, "Explanation JSON file")->required();
    rend->add_option("--templates", render_templates, "Template file");
    rend->add_option("--name", render_names, "Display name, ID=DISPLAY (repeatable)");

    bool table4_flag = false;
    std::string emit_stores;
    auto* demo = app.add_subcommand("demo", "Replay the built-in running example");
    demo->add_flag("--table4", table4_flag, "Use the running-example fixture")->required();
    demo->add_option("--emit-stores", emit_stores, "Also write the fixture as a stores document");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*simulate) return cmd_simulate(scenario_path, out_path, out);
        if (*assess) return cmd_assess(stores_path, model_flag, assessor, out);
        if (*expl) return cmd_explain(ef, out);
        if (*rend) return cmd_render(explanation_path, render_templates, render_names, out);
        if (*demo) return cmd_demo(emit_stores, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace reptrace::cli
