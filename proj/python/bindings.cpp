#include "hrnls/config.hpp"
#include "hrnls/errors.hpp"
#include "hrnls/experiments.hpp"
#include "hrnls/integrator.hpp"
#include "hrnls/monitor.hpp"
#include "hrnls/mmpde.hpp"
#include "hrnls/output.hpp"
#include "hrnls/physics.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>

namespace py = pybind11;
using namespace hrnls;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

RunConfig make_config(const std::string& preset, const std::map<std::string, std::string>& set,
                      const std::string& text) {
    RunConfig cfg = preset.empty() ? RunConfig{} : make_preset(preset);
    if (!text.empty()) cfg = parse_config_text(text, cfg);
    for (const auto& [k, v] : set) apply_setting(cfg, k, v);
    cfg.validate();
    return cfg;
}

py::dict counters_dict(const RunCounters& c) {
    py::dict d;
    d["NHR"] = c.nhr;
    d["NMAX"] = c.nmax;
    d["NMIN"] = c.nmin;
    d["NSTP"] = c.nstp;
    d["JACS"] = c.jacs;
    d["BS"] = c.bs;
    d["ETF"] = c.etf;
    d["CTF"] = c.ctf;
    d["equidistribution_warnings"] = c.equidistribution_warnings;
    return d;
}

py::dict series_dict(const std::vector<StepRecord>& series) {
    auto column = [&](auto get) {
        std::vector<double> v;
        v.reserve(series.size());
        for (const auto& r : series) v.push_back(static_cast<double>(get(r)));
        return to_array(v);
    };
    py::dict d;
    d["t"] = column([](const StepRecord& r) { return r.t; });
    d["dt"] = column([](const StepRecord& r) { return r.dt; });
    d["N"] = column([](const StepRecord& r) { return r.cells; });
    d["eta"] = column([](const StepRecord& r) { return r.eta; });
    d["eta_after"] = column([](const StepRecord& r) { return r.eta_after; });
    d["refined"] = column([](const StepRecord& r) { return r.refined ? 1.0 : 0.0; });
    d["err"] = column([](const StepRecord& r) { return r.err; });
    d["mesherr"] = column([](const StepRecord& r) { return r.mesherr; });
    d["Q_h"] = column([](const StepRecord& r) { return r.charge; });
    d["E_h"] = column([](const StepRecord& r) { return r.energy; });
    d["L2"] = column([](const StepRecord& r) { return r.l2_error; });
    return d;
}

FieldPair fields_of(const std::vector<double>& u, const std::vector<double>& v) {
    return FieldPair(u, v);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "hr-adaptive moving mesh solver for the 1D cubic Schrodinger equation";

    static py::exception<SolverError> solver_error(m, "SolverError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const SolverError& e) {
            py::object err = solver_error;
            py::object instance = err(e.what());
            instance.attr("kind") = e.kind();
            PyErr_SetObject(solver_error.ptr(), instance.ptr());
        }
    });

    py::class_<Snapshot>(m, "Snapshot")
        .def_readonly("t", &Snapshot::t)
        .def_property_readonly("x", [](const Snapshot& s) { return to_array(s.mesh.vector()); })
        .def_property_readonly("u", [](const Snapshot& s) { return to_array(s.fields.u); })
        .def_property_readonly("v", [](const Snapshot& s) { return to_array(s.fields.v); })
        .def_property_readonly("modulus",
                               [](const Snapshot& s) { return to_array(modulus(s.fields)); });

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("initial_cells", &RunResult::initial_cells)
        .def_readonly("initial_eta", &RunResult::initial_eta)
        .def_readonly("snapshots", &RunResult::snapshots)
        .def_property_readonly("counters",
                               [](const RunResult& r) { return counters_dict(r.counters); })
        .def_property_readonly("series", [](const RunResult& r) { return series_dict(r.series); })
        .def_property_readonly("config_text",
                               [](const RunResult& r) { return to_config_text(r.config); })
        .def_property_readonly("final_x",
                               [](const RunResult& r) { return to_array(r.final_state.mesh.vector()); })
        .def("mean_charge", &RunResult::mean_charge)
        .def("mean_energy", &RunResult::mean_energy);

    m.def("presets", &preset_names, "Names of the built-in experiment presets.");
    m.def(
        "config_text",
        [](const std::string& preset, const std::map<std::string, std::string>& set,
           const std::string& text) { return to_config_text(make_config(preset, set, text)); },
        py::arg("preset") = "", py::arg("set") = std::map<std::string, std::string>{},
        py::arg("text") = "", "Resolved configuration in key-value text form.");
    m.def(
        "run",
        [](const std::string& preset, const std::map<std::string, std::string>& set,
           const std::string& text) {
            const RunConfig cfg = make_config(preset, set, text);
            py::gil_scoped_release release;
            return run(cfg);
        },
        py::arg("preset") = "", py::arg("set") = std::map<std::string, std::string>{},
        py::arg("text") = "", "Integrates a preset with optional key overrides.");
    m.def("emit_results", &emit_results, py::arg("result"), py::arg("outdir"));
    m.def(
        "tolerance_sweep",
        [](const std::string& preset, const std::vector<double>& rtols,
           const std::map<std::string, std::string>& set, std::size_t workers) {
            const RunConfig cfg = make_config(preset, set, "");
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = tolerance_sweep(cfg, rtols, workers);
            }
            py::list out;
            for (const auto& r : rows) {
                py::dict d;
                d["rtol"] = r.rtol;
                d["ok"] = r.ok;
                d["N0"] = r.initial_cells;
                d["L2"] = r.final_l2_error;
                d["NSTP"] = r.counters.nstp;
                d["error"] = r.error;
                out.append(d);
            }
            return out;
        },
        py::arg("preset"), py::arg("rtols"),
        py::arg("set") = std::map<std::string, std::string>{}, py::arg("workers") = 0);

    m.def(
        "compare_with_reference",
        [](const std::string& solution_dir, const std::string& reference_dir) {
            const auto rows =
                compare_with_reference(read_snapshots(solution_dir), read_snapshots(reference_dir));
            py::list out;
            for (const auto& r : rows) out.append(py::make_tuple(r.t, r.max_error));
            return out;
        },
        py::arg("solution_dir"), py::arg("reference_dir"),
        "(t, max modulus error) for every snapshot written to solution_dir.");

    m.def("curvature_root", [](const std::vector<double>& x, const std::vector<double>& f) {
        return to_array(curvature_root(f, Mesh(x)));
    });
    m.def(
        "smooth_monitor",
        [](const std::vector<double>& m, double gamma, int p) {
            return to_array(smooth_monitor(m, gamma, p));
        },
        py::arg("midpoint"), py::arg("gamma") = 2.0, py::arg("p") = 3);
    m.def(
        "monitor",
        [](const std::vector<double>& x, const std::vector<double>& u, const std::vector<double>& v,
           std::optional<double> floor) {
            MonitorParams p;
            p.floor_override = floor;
            const auto prof = build_monitor(fields_of(u, v), Mesh(x), p);
            py::dict d;
            d["midpoint"] = to_array(prof.midpoint);
            d["smoothed"] = to_array(prof.smoothed);
            d["floor_u"] = prof.floor_u;
            d["floor_v"] = prof.floor_v;
            return d;
        },
        py::arg("x"), py::arg("u"), py::arg("v"), py::arg("floor") = std::nullopt);
    m.def(
        "eta",
        [](const std::vector<double>& x, const std::vector<double>& u, const std::vector<double>& v,
           std::optional<double> floor) {
            const Mesh mesh(x);
            return eta(assemble_monitor(fields_of(u, v), mesh, floor), mesh);
        },
        py::arg("x"), py::arg("u"), py::arg("v"), py::arg("floor") = std::nullopt);
    m.def(
        "equidistribute",
        [](const std::vector<double>& x, const std::vector<double>& monitor, std::size_t cells) {
            return to_array(equidistribute_once(Mesh(x), monitor, cells).vector());
        },
        py::arg("x"), py::arg("monitor"), py::arg("cells"),
        "One pass of equidistribution of a fixed piecewise-constant monitor.");
    m.def(
        "solve_mesh_step",
        [](const std::vector<double>& base, const std::vector<double>& iterate,
           const std::vector<double>& smoothed, double dt, double tau, double omega) {
            MeshSolveParams p;
            p.tau = tau;
            p.omega = omega;
            return to_array(solve_mesh_step(Mesh(base), Mesh(iterate), smoothed, dt, p).vector());
        },
        py::arg("base"), py::arg("iterate"), py::arg("smoothed"), py::arg("dt"),
        py::arg("tau") = 1e-3, py::arg("omega") = 0.8);
    m.def("sdirk2_stability", &sdirk2_stability, py::arg("z"));
    m.def(
        "exact_soliton",
        [](const std::vector<double>& x, double t, double a, double c, double x0, double q) {
            std::vector<double> u(x.size()), v(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                std::tie(u[i], v[i]) = exact_single_soliton({a, c, x0}, q, x[i], t);
            }
            return py::make_tuple(to_array(u), to_array(v));
        },
        py::arg("x"), py::arg("t"), py::arg("a") = 1.0, py::arg("c") = 1.0, py::arg("x0") = 0.0,
        py::arg("q") = 1.0);
    m.def(
        "conserved_quantities",
        [](const std::vector<double>& x, const std::vector<double>& u, const std::vector<double>& v,
           double q) {
            const auto cq = conserved_quantities(fields_of(u, v), Mesh(x), q);
            return py::make_tuple(cq.charge, cq.energy);
        },
        py::arg("x"), py::arg("u"), py::arg("v"), py::arg("q") = 1.0);
}
