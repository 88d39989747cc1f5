#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "grwcert/certify.hpp"
#include "grwcert/classify.hpp"
#include "grwcert/curvature.hpp"
#include "grwcert/error.hpp"
#include "grwcert/grw.hpp"
#include "grwcert/physics.hpp"
#include "grwcert/specfile.hpp"

namespace py = pybind11;
using namespace grwcert;

namespace {

using Matrix = std::vector<std::vector<double>>;

template <class T>
Matrix to_matrix(const Tensor<T, 2>& t)
{
    Matrix m(t.dim(), std::vector<double>(t.dim()));
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) m[i][j] = t(i, j).value();
    return m;
}

MetricChart chart_from_json(const std::string& spec_json) { return compile_chart(parse_spec(spec_json)); }

ChartPoint checked_point(const MetricChart& chart, const ChartPoint& p)
{
    if (static_cast<int>(p.size()) != chart.dim())
        throw py::value_error("point has " + std::to_string(p.size()) + " coordinates, chart has " +
                              std::to_string(chart.dim()));
    return p;
}

std::string certify_json(const std::string& spec_json, int points, std::uint64_t seed, double hypothesis_tol,
                         double conclusion_tol, double cluster_tol, double kappa, int workers,
                         const std::vector<std::string>& checks)
{
    RunConfig cfg;
    cfg.points = points;
    cfg.seed = seed;
    cfg.hypothesis_tol = hypothesis_tol;
    cfg.conclusion_tol = conclusion_tol;
    cfg.cluster_tol = cluster_tol;
    cfg.kappa = kappa;
    cfg.workers = workers;
    cfg.checks = checks;
    const auto chart = chart_from_json(spec_json);
    py::gil_scoped_release release;
    return report_json(certify(chart, cfg));
}

py::dict curvature_dict(const std::string& spec_json, const ChartPoint& p)
{
    const auto chart = chart_from_json(spec_json);
    const auto cp = curvature_at(chart, checked_point(chart, p));
    py::dict d;
    d["metric"] = to_matrix(cp.metric);
    d["ricci"] = to_matrix(cp.ricci);
    d["scalar"] = cp.R();
    d["first_bianchi"] = first_bianchi_residual(cp).scaled;
    d["second_bianchi"] = second_bianchi_residual(cp).scaled;
    d["div_weyl"] = div_weyl_residual(cp).scaled;
    return d;
}

py::dict fluid_dict(const std::string& spec_json, const ChartPoint& p, double cluster_tol)
{
    const auto chart = chart_from_json(spec_json);
    const auto fd = fluid_decompose(curvature_at(chart, checked_point(chart, p)), cluster_tol);
    py::dict d;
    d["status"] = to_string(fd.status);
    d["A"] = fd.A;
    d["B"] = fd.B;
    d["u"] = fd.u;
    d["u_up"] = fd.u_up;
    d["residual"] = fd.residual;
    d["eigenvalues"] = fd.eigenvalues;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Curvature certification of perfect-fluid and generalized Robertson-Walker metrics";

    static py::exception<Error> base(m, "GrwcertError");
    static py::exception<SchemaError> schema(m, "SchemaError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const SchemaError& e) {
            py::set_error(schema, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    m.def("catalog_names", &catalog_names);
    m.def(
        "catalog_spec", [](const std::string& name) { return spec_to_json(catalog_get(name).spec); }, py::arg("name"),
        "Spec document (JSON text) of a catalog entry.");
    m.def(
        "normalize_spec", [](const std::string& text) { return spec_to_json(parse_spec(text)); }, py::arg("spec_json"),
        "Validate a spec document and return its canonical form.");
    m.def("certify", &certify_json, py::arg("spec_json"), py::arg("points") = 50, py::arg("seed") = 1,
          py::arg("hypothesis_tol") = 1e-7, py::arg("conclusion_tol") = 1e-7, py::arg("cluster_tol") = kDefaultClusterTol,
          py::arg("kappa") = 1.0, py::arg("workers") = 1, py::arg("checks") = std::vector<std::string>{},
          "Run the certification suite; returns the JSON report.");
    m.def("curvature", &curvature_dict, py::arg("spec_json"), py::arg("point"));
    m.def("fluid_decompose", &fluid_dict, py::arg("spec_json"), py::arg("point"),
          py::arg("cluster_tol") = kDefaultClusterTol);
    m.def(
        "fluid_from_AB",
        [](double A, double B, double kappa, int n) {
            const auto s = fluid_from_AB(A, B, kappa, n);
            return std::make_pair(s.p, s.mu);
        },
        py::arg("A"), py::arg("B"), py::arg("kappa") = 1.0, py::arg("n") = 4, "Returns (p, mu).");
}
