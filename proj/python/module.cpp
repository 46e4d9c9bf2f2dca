#include "torsionkit/analysis.hpp"
#include "torsionkit/errors.hpp"
#include "torsionkit/reeb.hpp"
#include "torsionkit/torsion.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace tk;

namespace {

RunOptions parse_options(const std::string& options) {
    return options_from_json(options.empty() ? Json::object() : Json::parse(options));
}

Json parse_input(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError("", std::string("input is not valid JSON: ") + e.what());
    }
}

}  // namespace

PYBIND11_MODULE(_torsionkit, m) {
    m.doc() = "Exact torsion and ECH computations on divided-surface models";

    auto base = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<InvariantBreach>(m, "InvariantBreach", PyExc_RuntimeError);
    (void)base;

    m.def("commands", &commands);

    m.def(
        "run",
        [](const std::string& document, const std::string& command, const std::string& options) {
            auto input = parse_input(document);
            auto opts = parse_options(options);
            py::gil_scoped_release release;
            return run_analysis(input, command, opts).dump();
        },
        py::arg("document"), py::arg("command"), py::arg("options") = "{}",
        "Runs a command on a JSON document and returns the JSON report. Raises on failure.");

    m.def(
        "run_checked",
        [](const std::string& document, const std::string& command, const std::string& options) {
            try {
                auto input = parse_input(document);
                auto opts = parse_options(options);
                return std::make_pair(run_analysis(input, command, opts).dump(), 0);
            } catch (const std::exception& e) {
                auto [report, code] = error_report(command, e);
                return std::make_pair(report.dump(), code);
            }
        },
        py::arg("document"), py::arg("command"), py::arg("options") = "{}",
        "Like run, but returns (report, exit code) the way the command line tool does.");

    m.def("conley_zehnder", &conley_zehnder, py::arg("morse_index"), py::arg("cover"));

    m.def(
        "planar_upper_bound",
        [](int m_, int n, int r, int hbar_bound) -> py::object {
            PlanarTorsionDescriptor d;
            d.m = m_;
            d.n = n;
            d.r = r;
            auto pm = planar_torsion_differential(d, LatticeMap::to_zero(0));
            SolveBounds b;
            b.action_bound = pm.natural_action_bound;
            b.hbar_bound = hbar_bound;
            auto ub = torsion_upper_bound(pm.reg, pm.D, pm.gens, b);
            if (!ub) return py::none();
            return py::make_tuple(ub->k, ub->witness.str(pm.reg));
        },
        py::arg("m"), py::arg("n"), py::arg("r"), py::arg("hbar_bound") = 4,
        "Least k with hbar^k exact in the untwisted planar model, with its primitive.");
}
