#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polydicke/errors.hpp"
#include "polydicke/model.hpp"
#include "polydicke/observables.hpp"
#include "polydicke/phasemap.hpp"
#include "polydicke/quantum.hpp"
#include "polydicke/rwa.hpp"
#include "polydicke/varsurface.hpp"

namespace py = pybind11;
using namespace polydicke;

namespace {

AtomicSystem make_system(const std::vector<double>& omega, const std::vector<py::tuple>& transitions,
                         int atom_count) {
    std::vector<Transition> ts;
    for (const auto& t : transitions) {
        if (t.size() != 4) throw ConfigError("transitions are (j, k, Omega, mu) tuples");
        ts.push_back({{t[0].cast<int>(), t[1].cast<int>()}, t[2].cast<double>(), t[3].cast<double>()});
    }
    AtomicSystem s(omega, std::move(ts), atom_count);
    require_valid(s);
    return s;
}

py::dict candidate_dict(const VariationalCandidate& c) {
    static const char* kinds[] = {"normal", "low", "high"};
    py::dict d;
    d["kind"] = kinds[static_cast<int>(c.kind)];
    d["region"] = RegionLabel::of(c).name();
    d["pair"] = c.pair ? py::object(py::make_tuple(c.pair->j, c.pair->k)) : py::object(py::none());
    d["matter_amp"] = c.matter_amp;
    d["photon_amp"] = c.photon_amp;
    d["energy"] = c.energy;
    d["exists"] = c.exists;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Variational and exact ground states of multi-level atoms coupled to several field modes";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_LookupError);

    py::class_<AtomicSystem>(m, "AtomicSystem")
        .def(py::init(&make_system), py::arg("omega"), py::arg("transitions"), py::arg("atom_count") = 1)
        .def_static("from_json", [](const std::string& text) { return system_from_json(nlohmann::json::parse(text)); })
        .def_static("load", &load_system)
        .def("to_json", [](const AtomicSystem& s) { return system_to_json(s).dump(); })
        .def_property_readonly("levels", &AtomicSystem::levels)
        .def_property_readonly("mode_count", &AtomicSystem::mode_count)
        .def("with_mu", [](const AtomicSystem& s, std::pair<int, int> p, double mu) {
            return s.with_mu({p.first, p.second}, mu);
        });

    m.def("xi3", &presets::xi3, py::arg("mu12") = 0.0, py::arg("mu23") = 0.0);
    m.def("v3", &presets::v3, py::arg("mu12") = 0.0, py::arg("mu13") = 0.0);
    m.def("lambda3", &presets::lambda3, py::arg("mu13") = 0.0, py::arg("mu23") = 0.0);
    m.def("xi4", &presets::xi4, py::arg("mu12") = 0.0, py::arg("mu23") = 0.0, py::arg("mu34") = 0.0);

    m.def("reduced_energy", [](const AtomicSystem& s, const std::vector<double>& rho) { return reduced_energy(s, rho); });
    m.def("gradient", [](const AtomicSystem& s, const std::vector<double>& rho) { return gradient(s, rho); });
    m.def("candidates", [](const AtomicSystem& s) {
        py::list out;
        for (const auto& c : candidates(s)) out.append(candidate_dict(c));
        return out;
    });
    m.def("minimize", [](const AtomicSystem& s) { return candidate_dict(minimize(s)); });
    m.def(
        "minimize_numeric",
        [](const AtomicSystem& s, int starts, std::uint64_t seed) {
            NumericOptions opt;
            opt.starts = starts;
            opt.seed = seed;
            const auto r = minimize_numeric(s, opt);
            return py::make_tuple(r.rho, r.energy, r.converged);
        },
        py::arg("system"), py::arg("starts") = 16, py::arg("seed") = 20150101);

    m.def("normal_boundary", [](const AtomicSystem& s, std::pair<int, int> p) {
        return normal_boundary(s, {p.first, p.second});
    });
    m.def(
        "scan_grid",
        [](const AtomicSystem& s, const std::vector<std::tuple<std::pair<int, int>, double, double, int>>& axes) {
            std::vector<GridAxis> ga;
            for (const auto& [p, lo, hi, n] : axes) ga.push_back({{p.first, p.second}, lo, hi, n});
            const auto grid = scan_grid(s, ga);
            py::list cells;
            for (const auto& c : grid.cells) cells.append(py::make_tuple(c.coords, c.label.name(), c.energy));
            return cells;
        },
        py::arg("system"), py::arg("axes"));

    m.def("expectations", [](const AtomicSystem& s) {
        const auto c = minimize(s);
        const auto o = expectations(s, c);
        py::dict d;
        d["nu"] = o.nu;
        d["pop"] = o.pop;
        d["coh"] = o.coh;
        d["var_pop"] = o.var_pop;
        d["var_nu"] = o.var_nu;
        return d;
    });

    m.def("excitation_weights", [](const AtomicSystem& s) { return excitation_weights(s).lambda; });
    m.def("rwa_rescale", &rwa_rescale);

    m.def(
        "ground_state",
        [](const AtomicSystem& s, int atom_count, const std::vector<int>& cutoffs, bool rwa, std::uint64_t seed) {
            SolverConfig cfg;
            cfg.seed = seed;
            const auto r = ground_state(s, atom_count, cutoffs, rwa, cfg);
            py::dict d;
            d["energy"] = r.energy;
            d["sector"] = r.sector;
            d["nu"] = r.nu;
            d["pop"] = r.pop;
            d["boundary_weight"] = r.boundary_weight;
            d["residual"] = r.residual;
            if (s.mode_count() >= 2) {
                const auto dn = delta_nu(s, r, s.transitions()[0].pair, s.transitions()[1].pair);
                d["delta_nu"] = dn ? py::object(py::float_(*dn)) : py::object(py::none());
            }
            return d;
        },
        py::arg("system"), py::arg("atom_count"), py::arg("cutoffs"), py::arg("rwa") = false, py::arg("seed") = 1);
}
