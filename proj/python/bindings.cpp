#include "finslergeo/errors.hpp"
#include "finslergeo/geodesic_flow.hpp"
#include "finslergeo/geodesic_vectors.hpp"
#include "finslergeo/s_curvature.hpp"
#include "finslergeo/scenario.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace finslergeo;

namespace {

std::shared_ptr<const GroupModel> model_by_name(const std::string& name) { return make_group_model(name); }

ReductiveDecomposition decomposition_for(const std::string& name) {
  return ReductiveDecomposition(make_group_model(name)->algebra());
}

}  // namespace

PYBIND11_MODULE(_finslergeo, m) {
  m.doc() = "Finsler geometry on Lie groups: norms, geodesic vectors, geodesics, S-curvature";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<NonConvexNorm>(m, "NonConvexNorm", base.ptr());
  py::register_exception<NotPositiveDefinite>(m, "NotPositiveDefinite", base.ptr());
  py::register_exception<ZeroVector>(m, "ZeroVector", base.ptr());
  py::register_exception<SingularTensor>(m, "SingularTensor", base.ptr());
  py::register_exception<DegenerateVector>(m, "DegenerateVector", base.ptr());
  py::register_exception<ChartDomain>(m, "ChartDomain", base.ptr());
  py::register_exception<StepRejected>(m, "StepRejected", base.ptr());
  py::register_exception<QuadratureDivergence>(m, "QuadratureDivergence", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());

  py::class_<MinkowskiNorm>(m, "MinkowskiNorm")
      .def_static("euclidean", &MinkowskiNorm::euclidean, py::arg("a"))
      .def_static("randers", [](const Mat& a, const Vec& b) { return make_randers(a, b); }, py::arg("a"),
                  py::arg("b"))
      .def_property_readonly("dim", &MinkowskiNorm::dim)
      .def_property_readonly("label", &MinkowskiNorm::label)
      .def("__call__", [](const MinkowskiNorm& n, const Vec& y) { return eval_norm(n, y); });

  m.def("fundamental_tensor", [](const MinkowskiNorm& n, const Vec& y) { return fundamental_tensor(n, y).matrix; });
  m.def("cartan_tensor", [](const MinkowskiNorm& n, const Vec& y) {
    const auto C = cartan_tensor(n, y);
    const int d = n.dim();
    std::vector<double> flat;
    flat.reserve(static_cast<size_t>(d) * d * d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) flat.push_back(C(i, j, k));
      }
    }
    return flat;
  }, "Entries C(i, j, k) in row-major order.");

  m.def("geodesic_residual", [](const std::string& model, const MinkowskiNorm& norm, const Vec& x) {
    return geodesic_residual(decomposition_for(model), norm, x).residual;
  }, py::arg("model"), py::arg("norm"), py::arg("x"));

  m.def("find_geodesic_vectors", [](const std::string& model, const MinkowskiNorm& norm, int samples) {
    SolverOptions opts;
    opts.samples = samples;
    const auto set = find_geodesic_vectors(decomposition_for(model), norm, opts);
    py::dict out;
    out["representatives"] = set.representatives;
    out["residual_norms"] = set.residual_norms;
    out["branch_labels"] = set.branch_labels;
    std::vector<int> dims;
    for (const auto& s : branch_spans(set)) dims.push_back(s.span_dim);
    out["span_dims"] = dims;
    return out;
  }, py::arg("model"), py::arg("norm"), py::arg("samples") = 512);

  m.def("integrate_geodesic", [](const std::string& model, const MinkowskiNorm& norm, const Vec& x0, const Vec& y0,
                                 double T, double step) {
    const auto path = integrate_geodesic(ChartMetric(model_by_name(model), norm), x0, y0, T, step);
    std::vector<double> t, F;
    std::vector<Vec> x;
    for (const auto& s : path.samples) {
      t.push_back(s.t);
      x.push_back(s.x);
      F.push_back(s.F);
    }
    py::dict out;
    out["t"] = t;
    out["x"] = x;
    out["F"] = F;
    out["max_relative_drift"] = path.max_relative_drift();
    return out;
  }, py::arg("model"), py::arg("norm"), py::arg("x0"), py::arg("y0"), py::arg("T") = 2.0, py::arg("step") = 1e-3);

  m.def("busemann_sigma", [](const std::string& model, const MinkowskiNorm& norm, const Vec& x, int min_nodes) {
    return busemann_sigma(ChartMetric(model_by_name(model), norm), x, min_nodes).sigma;
  }, py::arg("model"), py::arg("norm"), py::arg("x"), py::arg("min_nodes") = 10000);

  m.def("s_curvature", [](const std::string& model, const MinkowskiNorm& norm, const Vec& x, const Vec& y, double dt) {
    return s_curvature(ChartMetric(model_by_name(model), norm), x, y, dt);
  }, py::arg("model"), py::arg("norm"), py::arg("x"), py::arg("y"), py::arg("dt") = 1e-3);

  m.def("run_scenario", [](const std::string& path) {
    const RunReport rep = run(parse_scenario_file(path));
    return py::make_tuple(rep.exit_code(), rep.machine());
  }, py::arg("path"), "Returns (exit_code, machine_report_json).");
}
