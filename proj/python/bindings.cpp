#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "diot/analysis.hpp"
#include "diot/error.hpp"
#include "diot/io.hpp"
#include "diot/solver.hpp"
#include "diot/tolls.hpp"

namespace py = pybind11;
using namespace diot;

namespace {

std::vector<std::string> edge_ids(const Network& n) {
  std::vector<std::string> ids;
  for (const auto& e : n.edges()) ids.push_back(e.id);
  return ids;
}

std::vector<std::vector<std::string>> path_edge_ids(const Network& n) {
  std::vector<std::vector<std::string>> out;
  for (const auto& p : n.paths()) {
    std::vector<std::string> ids;
    for (EdgeIndex e : p.edges) ids.push_back(n.edges()[e].id);
    out.push_back(std::move(ids));
  }
  return out;
}

SolverConfig config(double gap_tol, std::size_t max_iter) {
  SolverConfig c;
  c.relative_gap_tol = gap_tol;
  c.max_iterations = max_iter;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Nonatomic routing games and demand-independent optimal tolls";

  static py::exception<DiotError> error(m, "DiotError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DiotError& e) {
      PyErr_SetString(error.ptr(), (std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Network>(m, "Network")
      .def_property_readonly("beta", &Network::beta)
      .def_property_readonly("num_edges", &Network::num_edges)
      .def_property_readonly("num_paths", &Network::num_paths)
      .def_property_readonly("num_commodities", &Network::num_commodities)
      .def_property_readonly("edge_ids", &edge_ids)
      .def_property_readonly("paths", &path_edge_ids)
      .def("to_json", &emit_network);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("path_flow", &SolveResult::path_flow)
      .def_readonly("loads", &SolveResult::loads)
      .def_readonly("objective", &SolveResult::objective)
      .def_readonly("relative_gap", &SolveResult::relative_gap)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("converged", &SolveResult::converged);

  py::class_<TollConstruction>(m, "TollConstruction")
      .def_readonly("tolls", &TollConstruction::tolls)
      .def_readonly("vertex_order", &TollConstruction::vertex_order)
      .def_readonly("delta", &TollConstruction::delta)
      .def_readonly("chi", &TollConstruction::chi)
      .def_readonly("gamma", &TollConstruction::gamma);

  py::class_<SweepReport>(m, "SweepReport")
      .def_property_readonly("verdict", [](const SweepReport& r) { return std::string(verdict_name(r.verdict)); })
      .def_readonly("worst_relative_gap", &SweepReport::worst_relative_gap)
      .def_property_readonly("num_points", [](const SweepReport& r) { return r.points.size(); });

  m.def("parse_network", [](const std::string& text) { return parse_network(text); }, py::arg("text"));
  m.def("load_network", [](const std::string& path) { return load_network(path); }, py::arg("path"));

  m.def("solve_equilibrium",
        [](const Network& n, const DemandVector& demand, const TollVector& tolls, double gap_tol,
           std::size_t max_iter) { return solve_equilibrium(n, demand, tolls, config(gap_tol, max_iter)); },
        py::arg("network"), py::arg("demand"), py::arg("tolls") = TollVector{},
        py::arg("gap_tol") = 1e-8, py::arg("max_iter") = 100000);
  m.def("solve_optimum",
        [](const Network& n, const DemandVector& demand, double gap_tol, std::size_t max_iter) {
          return solve_optimum(n, demand, config(gap_tol, max_iter));
        },
        py::arg("network"), py::arg("demand"), py::arg("gap_tol") = 1e-8, py::arg("max_iter") = 100000);
  m.def("social_cost",
        [](const Network& n, const std::vector<double>& flow) { return social_cost(n, flow); },
        py::arg("network"), py::arg("path_flow"));
  m.def("price_of_anarchy",
        [](const Network& n, const DemandVector& demand) { return price_of_anarchy(n, demand); },
        py::arg("network"), py::arg("demand"));

  m.def("trivial_diot", &trivial_diot, py::arg("network"));
  m.def("nonnegative_diot_dag", &nonnegative_diot_dag, py::arg("network"));
  m.def("budget_diot", &budget_diot, py::arg("network"));
  m.def("marginal_cost_tolls",
        [](const Network& n, const DemandVector& demand) { return marginal_cost_tolls(n, demand); },
        py::arg("network"), py::arg("demand"));

  m.def("verify_diot",
        [](const Network& n, const TollVector& tolls, const std::vector<DemandVector>& points,
           double rel_tol, unsigned threads) {
          VerifyOptions options;
          options.rel_tol = rel_tol;
          options.threads = threads;
          const DemandGrid grid = points.empty() ? default_grid(n) : DemandGrid::list(points);
          return verify_diot(n, tolls, grid, options);
        },
        py::arg("network"), py::arg("tolls"), py::arg("points") = std::vector<DemandVector>{},
        py::arg("rel_tol") = 1e-5, py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
}
