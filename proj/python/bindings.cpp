#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rhino/errors.hpp"
#include "rhino/planner.hpp"
#include "rhino/protocol.hpp"
#include "rhino/stats.hpp"

namespace py = pybind11;
using namespace rhino;

namespace {

// Rows of '.', '#', '?' (Free, Blocked, Unknown); row index is iy.
TraversabilityGrid grid_from_rows(const std::vector<std::string>& rows, double cell_size) {
  if (rows.empty() || rows[0].empty()) throw Error(ErrorCode::InvalidArgument, "empty grid");
  TraversabilityConfig cfg;
  cfg.spec.cell_size = cell_size;
  cfg.spec.width = static_cast<int>(rows[0].size());
  cfg.spec.height = static_cast<int>(rows.size());
  TraversabilityGrid g(cfg);
  for (int iy = 0; iy < cfg.spec.height; ++iy) {
    if (rows[iy].size() != rows[0].size()) throw Error(ErrorCode::InvalidArgument, "ragged grid rows");
    for (int ix = 0; ix < cfg.spec.width; ++ix) {
      switch (rows[iy][ix]) {
        case '.': g.set({ix, iy}, CellState::Free, 0.0); break;
        case '#': g.set({ix, iy}, CellState::Blocked, 0.0); break;
        case '?': g.set({ix, iy}, CellState::Unknown, std::nullopt); break;
        default: throw Error(ErrorCode::InvalidArgument, "grid cells must be '.', '#' or '?'");
      }
    }
  }
  return g;
}

py::dict plan_rows(const std::vector<std::string>& rows, std::pair<int, int> start, std::pair<int, int> goal,
                   double cell_size) {
  const TraversabilityGrid g = grid_from_rows(rows, cell_size);
  const PlannedPath p = plan(g, {start.first, start.second}, {goal.first, goal.second});
  std::vector<std::pair<int, int>> cells;
  for (const Cell& c : p.cells) cells.emplace_back(c.ix, c.iy);
  py::dict out;
  out["cells"] = cells;
  out["cost"] = p.cost;
  out["straight"] = p.steps.straight;
  out["diagonal"] = p.steps.diagonal;
  return out;
}

py::dict t_result(const stats::TestResult& r) {
  py::dict d;
  d["mean"] = r.mean;
  d["sd"] = r.sd;
  d["n"] = r.n;
  d["t"] = r.t;
  d["p"] = r.p_two_sided;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the rhino_ar package";
  py::register_exception<Error>(m, "RhinoError", PyExc_RuntimeError);

  py::class_<Session>(m, "Session")
      .def(py::init([](const std::string& scenario_path) { return new Session(load_scenario(scenario_path)); }),
           py::arg("scenario_path"))
      .def("run_tick",
           [](Session& s) { return protocol::canonical(s.run_tick()); },
           "Advances one tick; returns the snapshot as canonical JSON text.")
      .def("snapshot", [](const Session& s) { return protocol::canonical(s.snapshot()); })
      .def("hello", [](const Session& s) { return protocol::hello_message(s); })
      .def("enqueue",
           [](Session& s, const std::string& command_json) {
             nlohmann::json j;
             try {
               j = nlohmann::json::parse(command_json);
             } catch (const nlohmann::json::exception& e) {
               throw Error(ErrorCode::ProtocolFormat, e.what());
             }
             s.enqueue(protocol::command_from_json(j));
           },
           py::arg("command_json"))
      .def_property_readonly("tick", [](const Session& s) { return s.snapshot().tick; });

  m.def("plan", &plan_rows, py::arg("rows"), py::arg("start"), py::arg("goal"), py::arg("cell_size") = 1.0,
        "A* over a character grid; cells are (ix, iy).");

  m.def("one_sample_t", [](double mean, double sd, int n, double mu0) {
    return t_result(stats::one_sample_t(mean, sd, n, mu0));
  }, py::arg("mean"), py::arg("sd"), py::arg("n"), py::arg("mu0") = 3.0);
  m.def("one_sample_t_samples", [](const std::vector<double>& x, double mu0) {
    return t_result(stats::one_sample_t(x, mu0));
  }, py::arg("samples"), py::arg("mu0") = 3.0);
  m.def("mann_whitney_u", [](const std::vector<double>& a, const std::vector<double>& b) {
    const auto r = stats::mann_whitney_u(a, b);
    py::dict d;
    d["u"] = r.u;
    d["u_a"] = r.u_a;
    d["p"] = r.p_two_sided;
    d["p_normal"] = r.p_normal;
    d["p_exact"] = r.p_exact ? py::cast(*r.p_exact) : py::none();
    return d;
  }, py::arg("a"), py::arg("b"));
  m.def("understanding_score", [](const std::vector<double>& f) { return stats::understanding_score(f); });
  m.def("reverse_item", &stats::reverse_item);
  m.def("fnv1a64", [](const std::string& bytes) { return protocol::fnv1a64(bytes); });
  m.attr("PROTOCOL_VERSION") = protocol::kVersion;
}
