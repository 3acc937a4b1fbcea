#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "reptrace/cli.hpp"
#include "reptrace/io.hpp"
#include "reptrace/pipeline.hpp"
#include "reptrace/render.hpp"
#include "reptrace/simulate.hpp"

namespace py = pybind11;
using namespace reptrace;

namespace {

// Documents cross the boundary as JSON text; the Python wrapper handles dicts.

explain::Model model_or(const std::optional<std::string>& flag, explain::Model fallback) {
    return flag ? explain::parse_model(*flag) : fallback;
}

std::string simulate(const std::string& scenario_json, std::optional<std::uint64_t> seed) {
    auto scenario = io::scenario_from_json(io::parse_json(scenario_json));
    if (seed) scenario.seed = *seed;
    auto result = sim::run_scenario(scenario);
    return io::stores_to_json(io::make_stores_document(scenario, std::move(result))).dump();
}

std::string assess(const std::string& stores_json, const std::string& assessor,
                   const std::optional<std::string>& model) {
    const auto doc = io::stores_from_json(io::parse_json(stores_json));
    const auto ranking = pipeline::rank_providers(doc, model_or(model, doc.model), AgentId(assessor));
    return pipeline::ranking_to_json(ranking).dump();
}

std::string explain_pair(const std::string& stores_json, const std::string& assessor,
                         const std::string& preferred, const std::string& other,
                         const std::optional<std::string>& model, const std::string& pros_order) {
    const auto doc = io::stores_from_json(io::parse_json(stores_json));
    explain::ExplainOptions options;
    if (pros_order == "ascending") {
        options.pros_order = explain::ProsOrder::Ascending;
    } else if (pros_order != "descending") {
        throw Error(ErrorCode::ConfigError, "pros_order must be 'descending' or 'ascending'");
    }
    const auto ctx = pipeline::build_context(doc, model_or(model, doc.model), AgentId(assessor),
                                             AgentId(preferred), AgentId(other));
    return io::explanation_to_json(explain::explain(ctx, options)).dump();
}

std::string render_text(const std::string& explanation_json, const std::map<std::string, std::string>& names,
                        const std::optional<std::string>& templates) {
    const auto e = io::explanation_from_json(io::parse_json(explanation_json));
    std::map<AgentId, std::string> display = {{e.preferred, e.preferred.str()}, {e.other, e.other.str()}};
    for (const auto& [id, name] : names) display[AgentId(id)] = name;
    auto set = render::TemplateSet::defaults();
    if (templates) {
        std::istringstream in(*templates);
        set = render::TemplateSet::parse(in);
    }
    return render::render_text(e, display, set);
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Explainable multi-term reputation (FIRE and TRAVOS backends).";

    static py::exception<Error> error(m, "ReptraceError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            exc.attr("code") = std::string(reptrace::to_string(e.code()));
            exc.attr("exit_code") = cli::exit_code(e.code());
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    m.def("simulate", &simulate, py::arg("scenario_json"), py::arg("seed") = py::none(),
          "Run a scenario; returns the stores document as JSON text.");
    m.def("assess", &assess, py::arg("stores_json"), py::arg("assessor"), py::arg("model") = py::none(),
          "Rank every provider for an assessor; returns the ranking document as JSON text.");
    m.def("explain", &explain_pair, py::arg("stores_json"), py::arg("assessor"), py::arg("preferred"),
          py::arg("other"), py::arg("model") = py::none(), py::arg("pros_order") = "descending");
    m.def("render", &render_text, py::arg("explanation_json"),
          py::arg("names") = std::map<std::string, std::string>{}, py::arg("templates") = py::none(),
          "Render an explanation document as text. `templates` is the content of a template file.");
    m.def("run_cli", &run_cli, py::arg("args"), "Run the command line tool in-process; returns (code, stdout, stderr).");

#ifdef REPTRACE_VERSION
    m.attr("__version__") = REPTRACE_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
