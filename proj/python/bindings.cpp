#include "qsdp/error.hpp"
#include "qsdp/estimator.hpp"
#include "qsdp/io.hpp"
#include "qsdp/ipm.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qsdp;

namespace {

// JSON documents cross the boundary as strings; the Python side decodes them.
std::string dump(const io::json& doc) { return doc.dump(); }

SolverParams params_from(double eps, double eps_newton, std::optional<std::int64_t> max_iters, int verify_every) {
  SolverParams p;
  p.eps = eps;
  p.eps_newton = eps_newton;
  p.max_iters = max_iters;
  p.verify_every = verify_every;
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Robust barrier-method SDP solver with simulated quantum oracles";

  // Messages start with the error kind, e.g. "InitNotOnPath: ...".
  py::register_exception<Error>(m, "QsdpError", PyExc_ValueError);

  py::class_<SdpInstance>(m, "Instance")
      .def(py::init<std::vector<Matrix>, Vector, Matrix>(), py::arg("A"), py::arg("b"), py::arg("C"))
      .def_property_readonly("n", &SdpInstance::n)
      .def_property_readonly("m", &SdpInstance::m)
      .def_property_readonly("A", &SdpInstance::constraints)
      .def_property_readonly("b", &SdpInstance::b)
      .def_property_readonly("C", &SdpInstance::c)
      .def("scaled", &SdpInstance::scaled)
      .def("to_json", [](const SdpInstance& inst) { return dump(io::instance_to_json(inst)); })
      .def_static("from_json", [](const std::string& text) { return io::instance_from_json(io::json::parse(text)).instance; });

  py::class_<SeededInstance>(m, "SeededInstance")
      .def_readonly("instance", &SeededInstance::instance)
      .def_readonly("y0", &SeededInstance::y0)
      .def_readonly("eta0", &SeededInstance::eta0);

  m.def("gen_case1", &seeded_case1, py::arg("m"));
  m.def("gen_case2", &seeded_case2);
  m.def("gen_random_wellcond", &gen_random_wellcond, py::arg("n"), py::arg("m"), py::arg("kappa"), py::arg("seed"));
  m.def("case2_central_path", &case2_central_path, py::arg("eta"));

  m.def("slack", &slack);
  m.def("gradient", [](const SdpInstance& inst, const Vector& y, double eta) {
    return gradient(inst, exact_slack_inverse_at(inst, y), eta);
  });
  m.def("hessian", [](const SdpInstance& inst, const Vector& y) {
    return hessian(inst, exact_slack_inverse_at(inst, y));
  });
  m.def("potential", &potential);
  m.def("barrier_value", &barrier_value);
  m.def("schedule", [](Eigen::Index n, double eps, double eps_newton) {
    const Schedule s = schedule(n, eps, eps_newton);
    return py::make_tuple(s.eta0, s.iterations);
  }, py::arg("n"), py::arg("eps") = 0.01, py::arg("eps_N") = 0.1);

  m.def(
      "solve",
      [](const SdpInstance& inst, const Vector& y0, const std::string& oracle, std::uint64_t seed, double eps,
         double eps_newton, std::optional<std::int64_t> max_iters, int verify_every, bool trace) {
        const SolverParams params = params_from(eps, eps_newton, max_iters, verify_every);
        std::unique_ptr<Oracle> o;
        if (oracle == "exact") {
          o = std::make_unique<ExactOracle>();
        } else if (oracle == "noisy") {
          NoiseModel noise;
          noise.seed = seed;
          o = std::make_unique<NoisyOracle>(noise);
        } else {
          throw Error(ErrorKind::InvalidInput, "oracle must be 'exact' or 'noisy'");
        }
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(inst, y0, params, *o, SolveOptions{trace, {}});
        }
        py::dict out;
        out["result"] = dump(io::result_to_json(r, o->name()));
        py::list records;
        for (const IterationRecord& rec : r.trace) records.append(dump(io::record_to_json(rec)));
        out["trace"] = records;
        return out;
      },
      py::arg("instance"), py::arg("y0"), py::arg("oracle") = "exact", py::arg("seed") = 0, py::arg("eps") = 0.01,
      py::arg("eps_N") = 0.1, py::arg("max_iters") = py::none(), py::arg("verify_every") = 1,
      py::arg("trace") = false);

  m.def(
      "estimate",
      [](const SdpInstance& inst, const Vector& y, double eta, double eps) {
        return dump(io::report_to_json(estimate(inst, y, eta, eps), inst.n(), inst.m()));
      },
      py::arg("instance"), py::arg("y"), py::arg("eta"), py::arg("eps") = 0.01);
}
