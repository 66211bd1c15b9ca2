// Python entry points. Configs and results cross the boundary as JSON text;
// the covlab package wraps them in dicts.

#include <pybind11/pybind11.h>

#include "covlab/errors.hpp"
#include "covlab/harness.hpp"

namespace py = pybind11;

namespace {

std::string run(const std::string& cfg, unsigned threads, std::uint64_t seed, std::uint64_t budget) {
    covlab::RunOptions opts;
    opts.threads = threads;
    opts.seed = seed;
    opts.budget = budget;
    covlab::ExperimentResult r;
    {
        py::gil_scoped_release release;
        r = covlab::run_experiment(covlab::json::parse(cfg), opts);
    }
    covlab::json rows = covlab::json::array();
    for (const auto& row : r.rows) rows.push_back(covlab::row_to_json(row));
    return covlab::json{{"rows", rows}, {"summary", r.summary}}.dump();
}

std::string format_rows(const std::string& rows_json, const std::string& format) {
    std::vector<covlab::ReportRow> rows;
    for (const auto& j : covlab::json::parse(rows_json))
        rows.push_back({j.at("experiment"), j.at("group"), j.at("params"), j.at("metric"), j.at("value"),
                        j.value("wall_ms", 0.0)});
    return covlab::format_report(rows, covlab::parse_format(format));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "covlab native core";

    static py::exception<covlab::Error> error(m, "CovlabError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const covlab::Error& e) {
            PyErr_SetObject(error.ptr(), py::make_tuple(std::string(covlab::to_string(e.kind())), e.message()).ptr());
        } catch (const covlab::json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("run_experiment", &run, py::arg("config"), py::arg("threads") = 1, py::arg("seed") = 0,
          py::arg("budget") = 0, "Run one experiment config (JSON text); returns {rows, summary} as JSON text.");
    m.def("format_report", &format_rows, py::arg("rows"), py::arg("format"),
          "Render rows (JSON text) as the json or csv report.");
}
