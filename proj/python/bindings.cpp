#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dualdebt/config.hpp"
#include "dualdebt/io.hpp"
#include "dualdebt/parallel.hpp"
#include "dualdebt/primal.hpp"
#include "dualdebt/sim.hpp"
#include "dualdebt/verify.hpp"

namespace py = pybind11;
using namespace dualdebt;

namespace {

// Python objects cross the boundary as JSON text.
nlohmann::json to_json(const py::object& obj) {
    if (obj.is_none()) return nlohmann::json::object();
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::object from_json(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

template <class T>
py::array_t<T> as_array(const Array3<T>& a) {
    py::array_t<T> out({a.dim0(), a.dim1(), a.dim2()});
    std::copy(a.data().begin(), a.data().end(), out.mutable_data());
    return out;
}

struct Solution {
    RunConfig cfg;
    Equilibrium eq;
};

py::dict check_dict(const CheckResult& r) {
    py::dict d;
    d["name"] = r.name;
    d["pass"] = r.pass;
    d["applicable"] = r.applicable;
    d["checked"] = r.checked;
    d["violations"] = r.violations;
    d["worst"] = r.worst;
    d["tolerance"] = r.tolerance;
    d["detail"] = r.detail;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dual value iteration for a firm with defaultable debt";
    m.attr("__version__") = DUALDEBT_VERSION;

    static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<ConvergenceError> convergence_error(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            py::set_error(config_error, e.what());
        } catch (const ConvergenceError& e) {
            py::set_error(convergence_error, e.what());
        }
    });

    py::class_<Solution>(m, "Solution")
        .def_property_readonly("V", [](const Solution& s) { return as_array(s.eq.V); }, "V[z, b, k]")
        .def_property_readonly("q", [](const Solution& s) { return as_array(s.eq.q.q); }, "q[z, b', k']")
        .def_property_readonly("B", [](const Solution& s) { return as_array(s.eq.B.B); }, "B[z, k, v]")
        .def_property_readonly("dividend", [](const Solution& s) { return as_array(s.eq.policy.dividend); })
        .def_property_readonly("b_next", [](const Solution& s) { return as_array(s.eq.policy.b_next); })
        .def_property_readonly("k_next", [](const Solution& s) { return as_array(s.eq.policy.k_next); })
        .def_property_readonly("grid_z", [](const Solution& s) { return s.eq.econ.chain.states; })
        .def_property_readonly("grid_b", [](const Solution& s) { return s.eq.econ.grids.b; })
        .def_property_readonly("grid_k", [](const Solution& s) { return s.eq.econ.grids.k; })
        .def_property_readonly("grid_v", [](const Solution& s) { return s.eq.econ.grids.v; })
        .def_property_readonly("theta", [](const Solution& s) { return s.eq.weights.theta; })
        .def_property_readonly("eta", [](const Solution& s) { return s.eq.weights.eta; })
        .def_property_readonly("config_hash", [](const Solution& s) { return config_hash(s.cfg); })
        .def("diagnostics", [](const Solution& s) { return from_json(diagnostics_json(s.eq.diagnostics)); })
        .def("targets",
             [](const Solution& s) {
                 const Targets t = compute_targets(s.eq.q, s.eq.econ);
                 py::dict d;
                 d["k_star"] = t.k_star;
                 d["b_star"] = t.b_star;
                 d["k_star_autarky"] = t.k_star_autarky;
                 return d;
             })
        .def("to_json", [](const Solution& s) { return from_json(equilibrium_json(s.eq, s.cfg)); });

    m.def(
        "solve",
        [](const py::object& config) {
            RunConfig cfg = parse_config(to_json(config));
            validate_config(cfg);
            Economy econ = make_economy(cfg);
            py::gil_scoped_release release;
            Equilibrium eq = solve_equilibrium(econ, cfg.solver);
            return Solution{std::move(cfg), std::move(eq)};
        },
        py::arg("config") = py::none(), "Solve the equilibrium for a config dict (defaults fill missing keys).");

    m.def(
        "load",
        [](const py::object& artifact) {
            Solution s;
            s.eq = equilibrium_from_json(to_json(artifact), &s.cfg);
            return s;
        },
        py::arg("artifact"), "Rebuild a Solution from the dict returned by Solution.to_json().");

    m.def(
        "verify",
        [](const Solution& s) {
            py::list out;
            for (const CheckResult& r : verify_equilibrium(s.eq, s.cfg.solver.tol)) out.append(check_dict(r));
            return out;
        },
        py::arg("solution"));

    m.def(
        "simulate",
        [](const Solution& s, std::size_t paths, std::size_t horizon, std::uint64_t seed) {
            Panel panel;
            {
                py::gil_scoped_release release;
                panel = simulate_paths(s.eq, paths, horizon, seed, default_start(s.eq));
            }
            py::dict d;
            d["stats"] = from_json(panel_stats_json(panel_stats(panel)));
            d["csv"] = panel_csv(panel);
            return d;
        },
        py::arg("solution"), py::arg("paths") = 1000, py::arg("horizon") = 200, py::arg("seed") = 12345);

    m.def(
        "noncontraction_demo",
        [](double nu, double eps, double b_hi, double k) {
            NonContractionInputs in;
            in.nu = nu;
            in.eps = eps;
            in.b_hi = b_hi;
            in.k = k;
            return from_json(noncontraction_json(noncontraction_demo(in)));
        },
        py::arg("nu") = 0.1, py::arg("eps") = 0.001, py::arg("b_hi") = 1.0, py::arg("k") = 0.01);

    m.def("set_jobs", [](unsigned n) { set_jobs(n); }, py::arg("n"), "Worker threads; 0 means hardware concurrency.");
}
