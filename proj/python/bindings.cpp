#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <sstream>

#include "sasvi/io.hpp"

namespace py = pybind11;
using namespace sasvi;

namespace {

std::string path_json(const ProblemInstance& inst, const std::vector<std::string>& rules, int grid, double lo,
                      double hi, const std::vector<double>& lambdas, double margin, double gap_tol, bool baseline,
                      bool fixed_anchor) {
    PathConfig cfg;
    cfg.rules.clear();
    for (const auto& r : rules) cfg.rules.push_back(parse_rule(r));
    cfg.grid.count = grid;
    cfg.grid.lo_ratio = lo;
    cfg.grid.hi_ratio = hi;
    cfg.grid.lambdas = lambdas;
    cfg.margin = margin;
    cfg.solver.gap_tol = gap_tol;
    cfg.baseline_unscreened = baseline;
    cfg.fixed_anchor = fixed_anchor;
    cfg.validate();
    PathResult res;
    {
        py::gil_scoped_release release;
        res = run_path(inst, cfg);
    }
    Json j = path_result_json(res);
    j["rejection"] = Json::array();
    for (const RejectionRow& row : rejection_ratio_table(res))
        j["rejection"].push_back({{"rule", row.rule},
                                  {"lambda_ratio", row.lambda_ratio},
                                  {"rejection_ratio", row.rejection_ratio},
                                  {"screen_ms", row.screen_ms},
                                  {"solve_ms", row.solve_ms},
                                  {"violations", row.violations}});
    return j.dump();
}

}  // namespace

PYBIND11_MODULE(_sasvi, m) {
    m.doc() = "Safe screening for the Lasso (compiled core)";

    py::register_exception<Error>(m, "SasviError", PyExc_ValueError);

    py::class_<ProblemInstance>(m, "Problem")
        .def(py::init<Matrix, Vector>(), py::arg("X"), py::arg("y"))
        .def_property_readonly("n", &ProblemInstance::n)
        .def_property_readonly("p", &ProblemInstance::p)
        .def_property_readonly("X", &ProblemInstance::X)
        .def_property_readonly("y", &ProblemInstance::y)
        .def("lambda_max", [](const ProblemInstance& inst) { return lambda_max(inst); });

    m.def(
        "generate_synthetic",
        [](Index n, Index p, Index p_bar, double rho, double sigma, std::uint64_t seed, bool standardize) {
            SyntheticSpec spec;
            spec.n = n;
            spec.p = p;
            spec.p_bar = p_bar;
            spec.rho = rho;
            spec.sigma = sigma;
            spec.seed = seed;
            SyntheticData d = generate_synthetic(spec);
            if (standardize) standardize_columns(d.X);
            return py::make_tuple(d.X, d.y, d.beta_true);
        },
        py::arg("n"), py::arg("p"), py::arg("p_bar"), py::arg("rho") = 0.5, py::arg("sigma") = 0.1,
        py::arg("seed") = 0, py::arg("standardize") = false);

    py::class_<PrimalDualSolution>(m, "Solution")
        .def_readonly("lam", &PrimalDualSolution::lambda)
        .def_readonly("beta", &PrimalDualSolution::beta)
        .def_readonly("theta", &PrimalDualSolution::theta)
        .def_readonly("primal", &PrimalDualSolution::primal)
        .def_readonly("dual", &PrimalDualSolution::dual)
        .def_readonly("gap", &PrimalDualSolution::gap)
        .def_readonly("sweeps", &PrimalDualSolution::sweeps_used)
        .def_readonly("certified", &PrimalDualSolution::certified);

    m.def(
        "solve",
        [](const ProblemInstance& inst, double lam, double gap_tol) {
            SolverConfig cfg;
            cfg.gap_tol = gap_tol;
            py::gil_scoped_release release;
            return solve(inst, lam, cfg);
        },
        py::arg("problem"), py::arg("lam"), py::arg("gap_tol") = 1e-10);

    py::class_<ScreeningAnchor>(m, "Anchor")
        .def_readonly("lambda1", &ScreeningAnchor::lambda1)
        .def_readonly("lambda_max", &ScreeningAnchor::lambda_max)
        .def_readonly("theta1", &ScreeningAnchor::theta1)
        .def_readonly("a", &ScreeningAnchor::a);

    m.def("anchor", [](const ProblemInstance& inst, const PrimalDualSolution& sol) { return build_anchor(inst, sol); },
          py::arg("problem"), py::arg("solution"));
    m.def("anchor_at_lambda_max", &trivial_anchor, py::arg("problem"));

    m.def(
        "screen",
        [](const std::string& rule, const ScreeningAnchor& anchor, double lambda2, double margin) {
            const ScreenReport rep = screen(parse_rule(rule), anchor, lambda2, margin);
            return py::make_tuple(rep.discarded, rep.bounds);
        },
        py::arg("rule"), py::arg("anchor"), py::arg("lambda2"), py::arg("margin") = kDefaultMargin,
        "Returns (discarded indices, per-feature bounds).");

    m.def(
        "sasvi_bounds",
        [](const ScreeningAnchor& anchor, Index j, double lambda2) {
            const BoundPair b = sasvi_bounds(anchor, j, lambda2);
            return py::make_tuple(b.u_plus, b.u_minus);
        },
        py::arg("anchor"), py::arg("j"), py::arg("lambda2"));

    m.def(
        "sure_removal",
        [](const ScreeningAnchor& anchor, double margin) {
            // nan: never removable; 0: removable for every lambda2 below lambda1
            Vector out(anchor.p());
            for (Index j = 0; j < anchor.p(); ++j) {
                const SureRemovalParameter ls = sure_removal_lambda(anchor, j, margin);
                out[j] = ls.finite() ? ls.lower() : std::numeric_limits<double>::quiet_NaN();
            }
            return out;
        },
        py::arg("anchor"), py::arg("margin") = kDefaultMargin);

    m.def("_path_json", &path_json, py::arg("problem"), py::arg("rules"), py::arg("grid"), py::arg("lo"),
          py::arg("hi"), py::arg("lambdas"), py::arg("margin"), py::arg("gap_tol"), py::arg("baseline"),
          py::arg("fixed_anchor"));
}
