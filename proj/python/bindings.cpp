#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rbfkit/assembly.hpp"
#include "rbfkit/diagnostics.hpp"
#include "rbfkit/error.hpp"
#include "rbfkit/io.hpp"
#include "rbfkit/kernels.hpp"
#include "rbfkit/solve.hpp"

namespace py = pybind11;
using namespace rbfkit;

namespace {

FitConfig make_config(const std::string& kernel, double shape, int degree, const std::string& solver,
                      bool normalize, double cg_tol, int cg_max_iter) {
  FitConfig config;
  config.kernel = Kernel(parse_kernel_kind(kernel), shape);
  config.degree = degree;
  config.solver = parse_solver_kind(solver);
  config.normalize = normalize;
  config.cg = CgOptions{cg_tol, cg_max_iter};
  config.validate();
  return config;
}

PointCloud make_cloud(const Points& points, const std::optional<Vector>& values) {
  return values ? PointCloud(points, *values) : PointCloud(points, Vector::Zero(points.rows()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radial basis function interpolation with polynomial tails";

  auto base = py::register_exception<Error>(m, "RbfkitError", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", base);
  py::register_exception<InvalidConfiguration>(m, "InvalidConfiguration", base);
  py::register_exception<DegenerateInput>(m, "DegenerateInput", base);
  py::register_exception<ParseError>(m, "ParseError", base);
  auto singular = py::register_exception<SingularSystem>(m, "SingularSystem", base);
  py::register_exception<SingularB>(m, "SingularB", singular);
  py::register_exception<RankDeficientP>(m, "RankDeficientP", singular);
  py::register_exception<NoConvergence>(m, "NoConvergence", base);

  py::class_<Kernel>(m, "Kernel")
      .def(py::init([](const std::string& kind, double shape) {
             return Kernel(parse_kernel_kind(kind), shape);
           }),
           py::arg("kind"), py::arg("shape") = 1.0)
      .def_property_readonly("kind", [](const Kernel& k) { return std::string(to_string(k.kind())); })
      .def_property_readonly("shape", &Kernel::shape)
      .def_property_readonly("support_radius", &Kernel::support_radius)
      .def_property_readonly("is_compact", &Kernel::is_compact)
      .def("__call__",
           [](const Kernel& k, py::array_t<double> r) {
             return py::vectorize([&k](double x) { return k(x); })(std::move(r));
           })
      .def("__repr__", [](const Kernel& k) {
        return "Kernel('" + std::string(to_string(k.kind())) + "', " + fmt_real(k.shape()) + ")";
      });

  py::class_<FitReport>(m, "FitReport")
      .def_property_readonly("solver", [](const FitReport& r) { return std::string(to_string(r.solver)); })
      .def_readonly("residual", &FitReport::residual)
      .def_readonly("cg_iterations", &FitReport::cg_iterations);

  py::class_<InterpolantModel>(m, "Model")
      .def_property_readonly("kernel", &InterpolantModel::kernel)
      .def_property_readonly("degree", [](const InterpolantModel& model) { return model.poly().degree(); })
      .def_property_readonly("dim", &InterpolantModel::dim)
      .def_property_readonly("centers", &InterpolantModel::centers)
      .def_property_readonly("weights", &InterpolantModel::lambda)
      .def_property_readonly("poly_coeffs", &InterpolantModel::poly_coeffs)
      .def_property_readonly("center", [](const InterpolantModel& model) { return model.transform().center(); })
      .def_property_readonly("half_extent",
                             [](const InterpolantModel& model) { return model.transform().half_extent(); })
      .def_property_readonly("report", &InterpolantModel::report)
      .def("evaluate", py::overload_cast<const Points&>(&InterpolantModel::evaluate, py::const_),
           py::arg("points"), "Evaluate at the rows of an (n, dim) array.")
      .def(
          "evaluate_grid",
          [](const InterpolantModel& model, const std::string& spec) {
            const GridSpec grid = GridSpec::parse(spec);
            return py::make_tuple(grid.nodes(), evaluate_grid(model, grid));
          },
          py::arg("spec"), "Evaluate on a 'lo:hi:n,...' grid; returns (nodes, values).")
      .def("side_condition_defect", &side_condition_defect)
      .def("to_json", [](const InterpolantModel& model) { return model_to_json(model).dump(); })
      .def_static(
          "from_json",
          [](const std::string& text) {
            nlohmann::json doc;
            try {
              doc = nlohmann::json::parse(text);
            } catch (const nlohmann::json::exception& e) {
              throw ParseError(std::string("model JSON: ") + e.what());
            }
            return model_from_json(doc);
          },
          py::arg("text"))
      .def("save", [](const InterpolantModel& model, const std::string& path) { write_model_json(model, path); })
      .def_static("load", [](const std::string& path) { return read_model_json(path); });

  m.def(
      "fit",
      [](const Points& points, const Vector& values, const std::string& kernel, double shape, int degree,
         const std::string& solver, bool normalize, double cg_tol, int cg_max_iter) {
        const FitConfig config = make_config(kernel, shape, degree, solver, normalize, cg_tol, cg_max_iter);
        py::gil_scoped_release release;
        return fit(PointCloud(points, values), config);
      },
      py::arg("points"), py::arg("values"), py::arg("kernel") = "wendland-c2", py::arg("shape") = 1.0,
      py::arg("degree") = 1, py::arg("solver") = "direct", py::arg("normalize") = true,
      py::arg("cg_tol") = 1e-10, py::arg("cg_max_iter") = 0);

  m.def(
      "diagnose",
      [](const Points& points, const std::optional<Vector>& values, const std::string& kernel, double shape,
         int degree, bool normalize, bool sparse) {
        const PointCloud cloud = make_cloud(points, values);
        const Kernel k(parse_kernel_kind(kernel), shape);
        const auto system = prepare_system(cloud, k, PolyBasis(degree, cloud.dim()),
                                           {sparse ? Storage::kSparse : Storage::kDense, normalize});
        return to_json(diagnose(system)).dump();
      },
      py::arg("points"), py::arg("values") = py::none(), py::arg("kernel") = "wendland-c2",
      py::arg("shape") = 1.0, py::arg("degree") = 1, py::arg("normalize") = true, py::arg("sparse") = false);

  m.def(
      "translation_experiment",
      [](const Points& points, const std::optional<Vector>& values, const std::vector<double>& offsets,
         const std::string& kernel, double shape, int degree) {
        const PointCloud cloud = make_cloud(points, values);
        const Kernel k(parse_kernel_kind(kernel), shape);
        return to_json(translation_experiment(cloud, k, PolyBasis(degree, cloud.dim()), offsets)).dump();
      },
      py::arg("points"), py::arg("values") = py::none(),
      py::arg("offsets") = std::vector<double>{0.0, 10.0, 100.0, 1000.0, 10000.0},
      py::arg("kernel") = "wendland-c2", py::arg("shape") = 1.0, py::arg("degree") = 1);

  m.def(
      "radius_neighbors",
      [](const Points& points, Index index, double radius) {
        std::vector<Index> out;
        for (const auto& nb : radius_neighbors(PointCloud(points), index, radius)) out.push_back(nb.index);
        return out;
      },
      py::arg("points"), py::arg("index"), py::arg("radius"));

  m.def("condition_estimate", &condition_estimate, py::arg("matrix"));
  m.def(
      "ptp_determinant_drift",
      [](const Points& points, int degree, double offset) {
        return ptp_translation_invariance_check(PointCloud(points), PolyBasis(degree, points.cols()), offset)
            .drift;
      },
      py::arg("points"), py::arg("degree"), py::arg("offset"));
}
