#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "thermograph/analysis.hpp"
#include "thermograph/dynamics.hpp"
#include "thermograph/entropy.hpp"
#include "thermograph/error.hpp"
#include "thermograph/io.hpp"
#include "thermograph/mesh.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace thermograph;

namespace {

std::vector<int> phases_as_ints(const TemperatureField& f) {
  std::vector<int> out;
  for (Phase x : f.phase) out.push_back(static_cast<int>(x));
  return out;
}

void set_phases(TemperatureField& f, const std::vector<int>& values) {
  f.phase.clear();
  for (int x : values) {
    if (x != 0 && x != 1) throw Error(Errc::invalid_argument, "phase values must be 0 or 1");
    f.phase.push_back(x == 1 ? Phase::liquid : Phase::solid);
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = R"pbdoc(
    Heat conduction on thermodynamic graphs
    ---------------------------------------

    Graph construction (grids, clipped Voronoi meshes), the explicit update
    and its stability bound, entropy functionals and operator diagnostics.
  )pbdoc";

  static py::exception<Error> error(m, "ThermographError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(errc_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<VertexProps>(m, "VertexProps")
      .def(py::init<>())
      .def(py::init([](double rho, double d, double c, double mu, double melting, bool boundary) {
             return VertexProps{rho, d, c, mu, melting, boundary, std::nullopt};
           }),
           py::arg("rho") = 1.0, py::arg("d") = 1.0, py::arg("c") = 1.0, py::arg("mu") = 0.0,
           py::arg("melting") = 0.0, py::arg("boundary") = false)
      .def_readwrite("rho", &VertexProps::rho)
      .def_readwrite("d", &VertexProps::d)
      .def_readwrite("c", &VertexProps::c)
      .def_readwrite("mu", &VertexProps::mu)
      .def_readwrite("melting", &VertexProps::melting)
      .def_readwrite("boundary", &VertexProps::boundary)
      .def_property_readonly("mass", &VertexProps::mass);

  py::class_<EdgeProps>(m, "EdgeProps")
      .def(py::init([](VertexId v, VertexId w, double S, double k, double dx) { return EdgeProps{v, w, S, k, dx}; }),
           py::arg("v"), py::arg("w"), py::arg("S") = 1.0, py::arg("k") = 1.0, py::arg("dx") = 1.0)
      .def_readwrite("v", &EdgeProps::v)
      .def_readwrite("w", &EdgeProps::w)
      .def_readwrite("S", &EdgeProps::S)
      .def_readwrite("k", &EdgeProps::k)
      .def_readwrite("dx", &EdgeProps::dx);

  py::class_<ThermoGraph>(m, "ThermoGraph")
      .def(py::init([](std::vector<VertexProps> vertices, const std::vector<EdgeProps>& edges) {
             return ThermoGraph::from_edges(std::move(vertices), edges);
           }),
           py::arg("vertices"), py::arg("edges"), "Each edge contributes both arcs.")
      .def_static("from_arcs",
                  [](std::vector<VertexProps> vertices, const std::vector<EdgeProps>& arcs) {
                    return ThermoGraph(std::move(vertices), arcs);
                  })
      .def_static("from_json", [](const std::string& text) { return io::graph_from_json(nlohmann::json::parse(text)); })
      .def("to_json", [](const ThermoGraph& g) { return io::graph_to_json(g).dump(1); })
      .def("__len__", &ThermoGraph::size)
      .def_property_readonly("vertices", &ThermoGraph::vertices)
      .def("edges", &ThermoGraph::edges)
      .def_property_readonly("boundary", &ThermoGraph::boundary)
      .def_property_readonly("interior", &ThermoGraph::interior);

  py::class_<TemperatureField>(m, "TemperatureField")
      .def(py::init([](std::vector<double> u) { return TemperatureField::from_temperatures(std::move(u)); }),
           py::arg("u"))
      .def_static("uniform", &TemperatureField::uniform)
      .def_readwrite("u", &TemperatureField::u)
      .def_property("phase", &phases_as_ints, &set_phases)
      .def_readwrite("latent", &TemperatureField::latent)
      .def("__len__", &TemperatureField::size);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_property_readonly("ok", &ValidationReport::ok)
      .def_property_readonly("violations",
                             [](const ValidationReport& r) {
                               std::vector<std::tuple<std::string, std::string, std::string>> out;
                               for (const auto& v : r.violations) out.emplace_back(v.rule, v.element, v.message);
                               return out;
                             })
      .def("__str__", &ValidationReport::summary);

  m.def("validate", &validate);
  m.def("heat_capacity_weights", [](const ThermoGraph& g) {
    auto w = heat_capacity_weights(g);
    return py::make_tuple(w.Phi, w.p);
  });
  m.def("thermal_energy", [](const ThermoGraph& g, const TemperatureField& f) {
    auto q = thermal_energy(g, f);
    return py::make_tuple(q.total, q.per_vertex);
  });
  m.def("enthalpy", &enthalpy);

  py::class_<Material>(m, "Material")
      .def(py::init([](double rho, double c, double mu, double melting, double k) {
             return Material{rho, c, mu, melting, k};
           }),
           py::arg("rho") = 1.0, py::arg("c") = 1.0, py::arg("mu") = 0.0, py::arg("melting") = 0.0,
           py::arg("k") = 1.0)
      .def_readwrite("rho", &Material::rho)
      .def_readwrite("c", &Material::c)
      .def_readwrite("mu", &Material::mu)
      .def_readwrite("melting", &Material::melting)
      .def_readwrite("k", &Material::k);

  m.def("build_grid_graph", &build_grid_graph, py::arg("nx"), py::arg("ny"), py::arg("dx") = 1.0,
        py::arg("dy") = 1.0, py::arg("material") = Material{}, py::arg("boundary_ring") = false);
  m.def(
      "build_voronoi_graph",
      [](const std::vector<std::pair<double, double>>& points, std::array<double, 4> bbox, const Material& material,
         std::vector<bool> boundary) {
        SiteSet sites;
        for (auto [x, y] : points) sites.points.push_back({x, y});
        sites.bbox = BBox{bbox[0], bbox[1], bbox[2], bbox[3]};
        sites.materials = {material};
        sites.boundary = std::move(boundary);
        return build_voronoi_graph(sites);
      },
      py::arg("points"), py::arg("bbox") = std::array<double, 4>{0, 0, 1, 1}, py::arg("material") = Material{},
      py::arg("boundary") = std::vector<bool>{});
  m.def(
      "random_sites",
      [](std::size_t n, std::array<double, 4> bbox, std::uint64_t seed) {
        auto sites = random_sites(n, BBox{bbox[0], bbox[1], bbox[2], bbox[3]}, seed);
        std::vector<std::pair<double, double>> out;
        for (const auto& p : sites.points) out.emplace_back(p.x, p.y);
        return out;
      },
      py::arg("n"), py::arg("bbox") = std::array<double, 4>{0, 0, 1, 1}, py::arg("seed") = 0);

  py::class_<HeatMatrix>(m, "HeatMatrix")
      .def_readonly("dt", &HeatMatrix::dt)
      .def("dense", &HeatMatrix::dense)
      .def("apply", &HeatMatrix::apply);

  m.def("max_stable_dt", &max_stable_dt);
  m.def("assemble_heat_matrix", &assemble_heat_matrix);
  m.def("step", &step, py::arg("graph"), py::arg("field"), py::arg("dt"), py::arg("threads") = 1);
  m.def("step_with_phase", &step_with_phase, py::arg("graph"), py::arg("field"), py::arg("dt"),
        py::arg("threads") = 1);

  py::class_<EntropyReport>(m, "EntropyReport")
      .def_readonly("Phi", &EntropyReport::Phi)
      .def_readonly("M", &EntropyReport::M)
      .def_readonly("D", &EntropyReport::D)
      .def_readonly("N", &EntropyReport::N)
      .def_readonly("S", &EntropyReport::S);

  m.def("mean_temperature", &mean_temperature);
  m.def("mean_abs_deviation", &mean_abs_deviation);
  m.def("negentropy", &negentropy);
  m.def("entropy", &entropy);
  m.def("entropy_delta", &entropy_delta);
  m.def("entropy_report", &entropy_report);

  py::class_<SimulationConfig>(m, "SimulationConfig")
      .def(py::init<>())
      .def_readwrite("dt", &SimulationConfig::dt)
      .def_readwrite("steps", &SimulationConfig::steps)
      .def_readwrite("convergence_tol", &SimulationConfig::convergence_tol)
      .def_readwrite("record_every", &SimulationConfig::record_every)
      .def_readwrite("safety_factor", &SimulationConfig::safety_factor)
      .def_readwrite("phase_tracking", &SimulationConfig::phase_tracking)
      .def_readwrite("keep_fields", &SimulationConfig::keep_fields);

  py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
      .def_readonly("step", &TrajectoryRecord::step)
      .def_readonly("t", &TrajectoryRecord::t)
      .def_readonly("field", &TrajectoryRecord::field)
      .def_readonly("Q_total", &TrajectoryRecord::Q_total)
      .def_readonly("enthalpy", &TrajectoryRecord::enthalpy)
      .def_readonly("entropy", &TrajectoryRecord::entropy);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("records", &Trajectory::records)
      .def_readonly("converged", &Trajectory::converged)
      .def_readonly("steps_taken", &Trajectory::steps_taken)
      .def_readonly("final_t", &Trajectory::final_t)
      .def_readonly("final_field", &Trajectory::final_field);

  m.def("auto_dt", &auto_dt, py::arg("graph"), py::arg("safety_factor") = 0.9);
  m.def("simulate", &simulate);

  m.def("is_stochastic", &is_stochastic);
  m.def("has_positive_diagonal", &has_positive_diagonal);
  m.def("is_strictly_diagonally_dominant", &is_strictly_diagonally_dominant);
  m.def(
      "power_limit",
      [](const HeatMatrix& A, const std::vector<double>& p, double tol) { return power_limit(A, p, tol); },
      py::arg("A"), py::arg("p"), py::arg("tol") = 1e-12);
  m.def(
      "contraction_factor",
      [](const HeatMatrix& A, const std::vector<VertexId>& boundary, std::size_t tau) {
        return contraction_factor(A, boundary, tau);
      },
      py::arg("A"), py::arg("boundary"), py::arg("tau"));
  m.def(
      "steady_state",
      [](const ThermoGraph& g, const std::vector<double>& values) { return steady_state(g, values); },
      py::arg("graph"), py::arg("boundary_values"));

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
