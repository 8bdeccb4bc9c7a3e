#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "simcost/cli.hpp"
#include "simcost/complexity.hpp"
#include "simcost/config.hpp"
#include "simcost/lindblad.hpp"
#include "simcost/norms.hpp"
#include "simcost/schemes.hpp"

namespace py = pybind11;
using namespace simcost;

namespace {

SuperOperator square_superop(const CMatrix& m) {
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(double(m.rows()))));
  if (m.rows() != m.cols() || d * d != std::size_t(m.rows()))
    throw std::invalid_argument("expected a d^2 x d^2 superoperator matrix");
  return SuperOperator(d, m);
}

py::tuple scheme_tuple(const SuperOperator& s, long depth) { return py::make_tuple(s.matrix, depth); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simulation cost of quantum Markov semigroups";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<AssumptionFailure>(m, "AssumptionFailure", PyExc_RuntimeError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<LindbladGenerator>(m, "LindbladGenerator")
      .def(py::init([](const CMatrix& h, const std::vector<CMatrix>& jumps) {
             const auto d = std::size_t(h.rows() ? h.rows() : (jumps.empty() ? 0 : jumps.front().rows()));
             return LindbladGenerator(SystemDims({d}), h, jumps);
           }),
           py::arg("hamiltonian"), py::arg("jumps"))
      .def_property_readonly("dim", &LindbladGenerator::dim)
      .def_readonly("hamiltonian", &LindbladGenerator::hamiltonian)
      .def_readonly("jumps", &LindbladGenerator::jumps)
      .def("superop", [](const LindbladGenerator& g) { return generator_superop(g).matrix; });

  m.def("pauli_model", &pauli_model, py::arg("n"));
  m.def("amplitude_damping_model", &amplitude_damping_model, py::arg("n"), py::arg("rate") = 1.0);
  m.def(
      "evolve", [](const LindbladGenerator& g, double t) { return evolve(Semigroup(g), t).matrix; }, py::arg("gen"),
      py::arg("t"));
  m.def("nogo_slope", &nogo_slope, py::arg("gen"));

  m.def(
      "diamond_norm", [](const CMatrix& s, double tol) { return diamond_norm(square_superop(s), {tol, 200}).value; },
      py::arg("superop"), py::arg("tol") = 1e-7);
  m.def(
      "diamond_distance",
      [](const CMatrix& a, const CMatrix& b, double tol) {
        return diamond_distance(square_superop(a), square_superop(b), {tol, 200});
      },
      py::arg("a"), py::arg("b"), py::arg("tol") = 1e-7);

  m.def(
      "symmetric_local_channel",
      [](const CMatrix& a, double t, double tau) {
        const auto ch = symmetric_local_channel(a, t, tau);
        return scheme_tuple(ch.superop(), depth(ch).total);
      },
      py::arg("a"), py::arg("t"), py::arg("tau") = 1.0);
  m.def(
      "amplitude_damping_exact",
      [](double t, std::size_t n, double rate, double tau) {
        const auto s = amplitude_damping_exact(t, n, rate, tau);
        return scheme_tuple(s.superop(), s.depth().total);
      },
      py::arg("t"), py::arg("n"), py::arg("rate") = 1.0, py::arg("tau") = 1.0);
  m.def(
      "pauli_noise_exact",
      [](double t, double tau) {
        const auto s = pauli_noise_exact(t, tau);
        return scheme_tuple(s.superop(), s.depth().total);
      },
      py::arg("t"), py::arg("tau") = 1.0);
  m.def("poisson_tail_bound", &poisson_tail_bound, py::arg("t"), py::arg("N"));
  m.def("min_truncation_order", &min_truncation_order, py::arg("alpha"), py::arg("beta"));

  m.def(
      "lipschitz_seminorm",
      [](const CMatrix& x, const std::vector<CMatrix>& members) {
        return lipschitz_seminorm(x, ResourceSet(std::size_t(x.rows()), members));
      },
      py::arg("x"), py::arg("members"));
  m.def(
      "complexity_lower",
      [](const CMatrix& phi, const std::vector<CMatrix>& members, const std::vector<CMatrix>& certificates) {
        const auto s = square_superop(phi);
        return complexity_lower(s, ResourceSet(s.dim(), members), certificates);
      },
      py::arg("phi"), py::arg("members"), py::arg("certificates"));
  m.def("pauli_lower_bound_closed_form", &pauli_lower_bound_closed_form, py::arg("alpha"), py::arg("beta"),
        py::arg("n"), py::arg("tau"));

  m.def(
      "simulate",
      [](const std::string& config_path, const std::string& scheme, int workers) {
        const auto cfg = load_config(config_path);
        py::gil_scoped_release release;
        return rows_to_csv(cmd_simulate(cfg, scheme, workers > 0 ? workers : default_workers()));
      },
      py::arg("config"), py::arg("scheme"), py::arg("workers") = 0);
  m.def(
      "bound",
      [](const std::string& config_path, const std::string& kind, bool force) {
        const auto cfg = load_config(config_path);
        py::gil_scoped_release release;
        return bound_json(cmd_bound(cfg, kind, force));
      },
      py::arg("config"), py::arg("kind") = "uniform", py::arg("force") = false);
  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "simcost");
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        return run_cli(int(argv.size()), argv.data());
      },
      py::arg("args"));
}
