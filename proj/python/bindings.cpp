#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pentadot/gates.hpp"
#include "pentadot/io.hpp"
#include "pentadot/studies.hpp"

namespace py = pybind11;
using namespace pentadot;

namespace {

DeviceDelta delta_from_dict(const py::dict& edges, const py::dict& sites) {
  DeviceDelta d;
  for (auto [k, v] : edges) {
    const auto ij = k.cast<std::pair<int, int>>();
    d.edge_deltas[EdgeKey(ij.first, ij.second)] = v.cast<double>();
  }
  for (auto [k, v] : sites) {
    const auto mb = v.cast<std::pair<double, double>>();
    d.site_deltas[k.cast<int>()] = SiteDelta{mb.first, mb.second};
  }
  return d;
}

py::list splitting_points(const std::vector<SplittingPoint>& pts) {
  py::list out;
  for (const auto& p : pts) {
    out.append(py::dict(py::arg("value") = p.value, py::arg("splitting") = p.splitting, py::arg("e0") = p.e0,
                        py::arg("symmetry_commutator") = p.symmetry_commutator,
                        py::arg("first_order") = p.first_order));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_pentadot, m) {
  m.doc() = "Five-dot composite qubit: exact diagonalization and effective gates";

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<GapClosedError>(m, "GapClosedError", PyExc_RuntimeError);

  py::class_<Dot>(m, "Dot")
      .def(py::init([](int id, double U, double mu, double bz) { return Dot{id, U, mu, bz}; }), py::arg("id"),
           py::arg("U"), py::arg("mu") = 0.0, py::arg("bz") = 0.0)
      .def_readwrite("id", &Dot::id)
      .def_readwrite("U", &Dot::U)
      .def_readwrite("mu", &Dot::mu)
      .def_readwrite("bz", &Dot::bz);

  py::class_<Edge>(m, "Edge")
      .def(py::init([](int i, int j, double t) { return Edge{i, j, t}; }), py::arg("i"), py::arg("j"), py::arg("t"))
      .def_readwrite("i", &Edge::i)
      .def_readwrite("j", &Edge::j)
      .def_readwrite("t", &Edge::t);

  py::class_<DeviceGraph>(m, "DeviceGraph")
      .def(py::init<std::vector<Dot>, std::vector<Edge>>(), py::arg("dots"), py::arg("edges"))
      .def_property_readonly("dots", &DeviceGraph::dots)
      .def_property_readonly("edges", &DeviceGraph::edges)
      .def_property_readonly("n_dots", &DeviceGraph::n_dots)
      .def("to_json", [](const DeviceGraph& g) { return dump(device_to_json(g)); })
      .def("__eq__", [](const DeviceGraph& a, const DeviceGraph& b) { return a == b; });

  py::class_<DeviceDelta>(m, "DeviceDelta")
      .def(py::init(&delta_from_dict), py::arg("edges") = py::dict(), py::arg("sites") = py::dict(),
           "edges maps (i, j) to dt; sites maps a dot id to (dmu, bz).")
      .def("empty", &DeviceDelta::empty)
      .def("scaled", &DeviceDelta::scaled)
      .def("__add__", [](const DeviceDelta& a, const DeviceDelta& b) { return a + b; })
      .def("to_json", [](const DeviceDelta& d) { return dump(delta_to_json(d)); });

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("tol", &SolverOptions::tol)
      .def_readwrite("dense_threshold", &SolverOptions::dense_threshold)
      .def_readwrite("krylov_dim", &SolverOptions::krylov_dim)
      .def_readwrite("max_matvecs", &SolverOptions::max_matvecs)
      .def_readwrite("seed", &SolverOptions::seed)
      .def_readwrite("cluster_tol", &SolverOptions::cluster_tol);

  m.def("five_dot", &five_dot, py::arg("t") = -1.0, py::arg("U") = 8.0, py::arg("mu") = 0.0,
        py::arg("mu_center_offset") = 0.0);
  m.def("two_qubit_device", &two_qubit_device, py::arg("t") = -1.0, py::arg("U") = 8.0, py::arg("mu") = 0.0,
        py::arg("coupling_edges") = default_coupling_edges());
  m.def("default_coupling_edges", &default_coupling_edges);
  m.def("load_device", &load_device, py::arg("path"));
  m.def("tunneling_pulse", &tunneling_pulse, py::arg("center"), py::arg("outer"), py::arg("dt"));
  m.def("coupling_pulse", &coupling_pulse, py::arg("edges"), py::arg("dt"));

  py::class_<QubitSetup>(m, "QubitSetup")
      .def_readonly("device", &QubitSetup::device)
      .def_readonly("idle_energy", &QubitSetup::idle_energy)
      .def_property_readonly("basis_tag", [](const QubitSetup& q) { return q.encoded.basis_tag; })
      .def_property_readonly("vectors", [](const QubitSetup& q) { return q.encoded.vectors; })
      .def_property_readonly("ground_multiplicity", [](const QubitSetup& q) { return q.ground.ground().multiplicity; })
      .def_property_readonly("ground_spin", [](const QubitSetup& q) { return q.ground.ground().spin; })
      .def_property_readonly("gap", [](const QubitSetup& q) { return q.ground.gap_to_next; });

  m.def("encode_single_qubit", &encode_single_qubit, py::arg("device"), py::arg("n_electrons") = 4,
        py::arg("opts") = SolverOptions{});
  m.def("encode_two_qubits", &encode_two_qubits, py::arg("device"), py::arg("opts") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<EffectiveGate>(m, "EffectiveGate")
      .def_readonly("matrix", &EffectiveGate::matrix)
      .def_readonly("first_order", &EffectiveGate::first_order)
      .def_readonly("diagonal", &EffectiveGate::diagonal)
      .def_readonly("max_off_diagonal", &EffectiveGate::max_off_diagonal)
      .def_readonly("method", &EffectiveGate::method)
      .def_readonly("method_difference", &EffectiveGate::method_difference)
      .def_readonly("gap", &EffectiveGate::gap)
      .def_property_readonly("pauli",
                             [](const EffectiveGate& g) {
                               return py::dict(py::arg("i") = g.pauli.i, py::arg("x") = g.pauli.x,
                                               py::arg("y") = g.pauli.y, py::arg("z") = g.pauli.z);
                             })
      .def("to_json", [](const EffectiveGate& g) { return dump(gate_report(g)); });

  m.def("effective_hamiltonian", &effective_hamiltonian, py::arg("setup"), py::arg("delta"));
  m.def("effective_two_qubit", &effective_two_qubit, py::arg("setup"), py::arg("delta"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<Plateau>(m, "Plateau")
      .def_readonly("n", &Plateau::n)
      .def_readonly("mu_lo", &Plateau::mu_lo)
      .def_readonly("mu_hi", &Plateau::mu_hi)
      .def_readonly("bounded", &Plateau::bounded)
      .def_readonly("multiplicity", &Plateau::multiplicity)
      .def_readonly("spin", &Plateau::spin)
      .def_property_readonly("width", &Plateau::width);

  m.def("mu_grid", &mu_grid, py::arg("lo"), py::arg("hi"), py::arg("step"));
  m.def(
      "staircase",
      [](const DeviceGraph& g, const std::vector<double>& grid) {
        const StaircaseTable t = occupancy_staircase(g, grid);
        std::vector<int> n;
        for (const auto& r : t.rows) n.push_back(r.n.front());
        return py::make_tuple(n, t.plateaus);
      },
      py::arg("device"), py::arg("grid"), "Returns (N per grid point, plateaus).");

  m.def(
      "ground_levels",
      [](const DeviceGraph& g) {
        const SectorLadder ladder(g);
        py::dict out;
        for (const auto& s : ladder.sectors()) {
          out[py::make_tuple(s.n_up, s.n_dn)] = s.levels;
        }
        return out;
      },
      py::arg("device"), "Lowest levels of every (n_up, n_dn) sector.");

  m.def(
      "heisenberg_levels",
      [](int n_spins, double J) {
        const SparseOperator h = assemble_heisenberg(uniform_couplings(n_spins, J), n_spins);
        return lowest_k_dense(h, h.dim()).eigenvalues;
      },
      py::arg("n_spins"), py::arg("J") = 1.0);

  m.def(
      "local_field_immunity",
      [](const DeviceGraph& g, const std::vector<double>& bz, const std::vector<std::pair<int, double>>& pattern) {
        return splitting_points(local_field_immunity(g, bz, pattern).points);
      },
      py::arg("device"), py::arg("bz_values"), py::arg("pattern") = std::vector<std::pair<int, double>>{{1, 1.0}});

  m.def(
      "robustness_scan",
      [](const std::string& kind, const std::vector<double>& deltas) {
        return splitting_points(robustness_scan(robustness_from_string(kind), deltas).points);
      },
      py::arg("kind"), py::arg("rel_deltas"));
}
