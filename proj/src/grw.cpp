#include "grwcert/grw.hpp"

#include <algorithm>
#include <cmath>

#include "grwcert/error.hpp"

namespace grwcert {

ChartSpec warped_product_spec(const std::string& name, const WarpSpec& warp, const ChartSpec& fiber)
{
    const int d = fiber.dimension;
    ChartSpec s;
    s.name = name;
    s.dimension = d + 1;
    s.signature = Signature::Lorentzian;
    s.coordinates.push_back(warp.t_name);
    s.coordinates.insert(s.coordinates.end(), fiber.coordinates.begin(), fiber.coordinates.end());
    s.parameters = fiber.parameters;
    s.metric[{0, 0}] = "-1";
    const std::string q2 = "(" + warp.q + ")^2";
    for (const auto& [ij, expr] : fiber.metric) s.metric[{ij.first + 1, ij.second + 1}] = q2 + "*(" + expr + ")";
    s.velocity_field = std::vector<std::string>(d + 1, "0");
    (*s.velocity_field)[0] = "-1";
    s.ranges.push_back(warp.t_range);
    s.ranges.insert(s.ranges.end(), fiber.ranges.begin(), fiber.ranges.end());
    s.exclusions = fiber.exclusions;

    ChartPoint base{warp.t_range.first};
    if (fiber.basepoint) {
        base.insert(base.end(), fiber.basepoint->begin(), fiber.basepoint->end());
    } else {
        for (const auto& [lo, hi] : fiber.ranges) base.push_back(0.5 * (lo + hi));
    }
    s.basepoint = base;
    s.warped_product = WarpedProductSpec{warp.q, fiber.metric};
    return s;
}

MetricChart build_grw(const std::string& name, const WarpSpec& warp, const ChartSpec& fiber, int probe_count)
{
    if (fiber.signature != Signature::Riemannian) throw ChartError("fiber metric must be riemannian");
    std::vector<std::string> params;
    for (const auto& [k, v] : fiber.parameters) params.push_back(k);
    const auto q = parse(warp.q, {warp.t_name}, params);
    const auto bound = bind_parameters(q, fiber.parameters);
    compile_chart(fiber);

    const auto [lo, hi] = warp.t_range;
    for (int i = 0; i < probe_count; ++i) {
        const double t = probe_count == 1 ? lo : lo + (hi - lo) * i / (probe_count - 1);
        const double value = eval_value(q, std::span<const double>(&t, 1), bound);
        if (!(value > warp.delta))
            throw ChartError("warp function " + warp.q + " is not positive at t = " + std::to_string(t));
    }
    return compile_chart(warped_product_spec(name, warp, fiber));
}

MetricChart fiber_chart(const MetricChart& grw)
{
    const auto& s = grw.spec();
    if (!s.warped_product) throw ChartError("chart '" + s.name + "' carries no warped-product data");
    ChartSpec f;
    f.name = s.name + "/fiber";
    f.dimension = s.dimension - 1;
    f.signature = Signature::Riemannian;
    f.coordinates.assign(s.coordinates.begin() + 1, s.coordinates.end());
    f.parameters = s.parameters;
    f.metric = s.warped_product->fiber_metric;
    f.ranges.assign(s.ranges.begin() + 1, s.ranges.end());
    if (s.basepoint) f.basepoint = ChartPoint(s.basepoint->begin() + 1, s.basepoint->end());
    std::vector<std::string> params;
    for (const auto& [k, v] : s.parameters) params.push_back(k);
    for (const auto& ex : s.exclusions) {
        try {
            parse(ex.expr, f.coordinates, params);
            f.exclusions.push_back(ex);
        } catch (const UnknownIdentifier&) {
            // depends on t; not a fiber constraint
        }
    }
    return compile_chart(f);
}

Residual fiber_einstein_at(const CurvaturePoint& fcp)
{
    const int d = fcp.n;
    const double ratio = fcp.R() / d;
    double worst = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) worst = std::max(worst, std::abs(fcp.ric(a, b) - ratio * fcp.g(a, b)));
    return Residual::of(worst, max_abs(fcp.ricci));
}

Residual fiber_einstein_check(const MetricChart& fiber, std::span<const ChartPoint> points)
{
    Residual r;
    for (const auto& p : points) r.merge(fiber_einstein_at(curvature_at(fiber, p)));
    return r;
}

WarpValues warp_at(const MetricChart& grw, double t)
{
    const auto& s = grw.spec();
    if (!s.warped_product) throw ChartError("chart '" + s.name + "' carries no warped-product data");
    const auto q = grw.parse_expr(s.warped_product->warp);
    auto p = grw.probe_point();
    p[0] = t;
    const auto j = eval_jet<2>(q, p, grw.parameter_values());
    return {j.value(), j.d(0), j.d(0, 0)};
}

const char* const kConverseResolutionNote =
    "B is compared with A − (n−1)q″/q, the form implied by the warped-product Ricci tensor "
    "R_tt = −(n−1)q″/q. The alternative A − (n−1)q′/q disagrees with a hand-coded Christoffel "
    "computation (q = t², t = 2) and is reported only as the diagnostic B_printed_gap.";

ConversePoint converse_at(const MetricChart& grw, const MetricChart& fiber, const CurvaturePoint& cp,
                          double cluster_tol)
{
    const int n = cp.n;
    ConversePoint c;
    const auto fd = fluid_decompose(cp, cluster_tol);
    c.status = fd.status;
    c.A_computed = fd.A;
    c.B_computed = fd.B;

    const ChartPoint fp(cp.point.begin() + 1, cp.point.end());
    c.R_star = curvature_at(fiber, fp).R();
    c.warp = warp_at(grw, cp.point[0]);
    const auto [q, dq, ddq] = c.warp;
    c.A_formula = (c.R_star / (n - 1) + (n - 2) * dq * dq + q * ddq) / (q * q);
    c.B_formula = c.A_formula - (n - 1) * ddq / q;
    c.B_printed = c.A_formula - (n - 1) * dq / q;

    c.A = Residual::of(std::abs(c.A_computed - c.A_formula), std::abs(c.A_formula));
    if (fd.ok()) {
        c.B = Residual::of(std::abs(c.B_computed - c.B_formula), std::abs(c.B_formula));
        c.B_printed_gap = Residual::of(std::abs(c.B_computed - c.B_printed), std::abs(c.B_printed));
    }
    return c;
}

ConverseReport converse_check(const MetricChart& grw, std::span<const ChartPoint> points, double cluster_tol)
{
    const auto fiber = fiber_chart(grw);
    ConverseReport rep;
    for (const auto& p : points) {
        const auto cp = curvature_at(grw, p);
        auto c = converse_at(grw, fiber, cp, cluster_tol);
        rep.A.merge(c.A);
        rep.B.merge(c.B);
        rep.B_printed_gap.merge(c.B_printed_gap);
        rep.degenerate = rep.degenerate || c.status == FluidStatus::EinsteinDegenerate;
        rep.fiber_einstein.merge(fiber_einstein_at(curvature_at(fiber, ChartPoint(p.begin() + 1, p.end()))));
        rep.points.push_back(c);
    }
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kPi = 3.141592653589793;

ChartSpec fiber_spec(std::vector<std::string> coords, const std::vector<std::string>& diag,
                     std::vector<std::pair<double, double>> ranges, std::vector<Exclusion> exclusions = {})
{
    ChartSpec f;
    f.dimension = static_cast<int>(coords.size());
    f.signature = Signature::Riemannian;
    f.coordinates = std::move(coords);
    for (int i = 0; i < f.dimension; ++i) f.metric[{i, i}] = diag[i];
    f.ranges = std::move(ranges);
    f.exclusions = std::move(exclusions);
    return f;
}

ChartSpec flat3() { return fiber_spec({"x", "y", "z"}, {"1", "1", "1"}, {{0, 1}, {0, 1}, {0, 1}}); }

ChartSpec sphere3()
{
    return fiber_spec({"chi", "theta", "phi"}, {"1", "sin(chi)^2", "sin(chi)^2*sin(theta)^2"},
                      {{0, kPi}, {0, kPi}, {0, 2 * kPi}}, {{"sin(chi)", 0.1}, {"sin(theta)", 0.1}});
}

ChartSpec hyperbolic3()
{
    return fiber_spec({"chi", "theta", "phi"}, {"1", "sinh(chi)^2", "sinh(chi)^2*sin(theta)^2"},
                      {{0, 1.5}, {0, kPi}, {0, 2 * kPi}}, {{"sinh(chi)", 0.1}, {"sin(theta)", 0.1}});
}

ChartSpec sphere4()
{
    return fiber_spec({"chi", "psi", "theta", "phi"},
                      {"1", "sin(chi)^2", "sin(chi)^2*sin(psi)^2", "sin(chi)^2*sin(psi)^2*sin(theta)^2"},
                      {{0, kPi}, {0, kPi}, {0, kPi}, {0, 2 * kPi}},
                      {{"sin(chi)", 0.1}, {"sin(psi)", 0.1}, {"sin(theta)", 0.1}});
}

ChartSpec sphere2_circle()
{
    return fiber_spec({"theta", "phi", "z"}, {"1", "sin(theta)^2", "1"}, {{0, kPi}, {0, 2 * kPi}, {0, 1}},
                      {{"sin(theta)", 0.1}});
}

CatalogEntry grw_entry(const std::string& name, const WarpSpec& warp, const ChartSpec& fiber, CatalogExpectation e)
{
    auto spec = warped_product_spec(name, warp, fiber);
    auto chart = build_grw(name, warp, fiber);
    return {std::move(spec), std::move(chart), std::move(e)};
}

CatalogEntry kasner()
{
    ChartSpec s;
    s.name = "kasner-negative";
    s.dimension = 4;
    s.coordinates = {"t", "x", "y", "z"};
    s.metric[{0, 0}] = "-1";
    s.metric[{1, 1}] = "t^(-2/3)";
    s.metric[{2, 2}] = "t^(4/3)";
    s.metric[{3, 3}] = "t^(4/3)";
    s.velocity_field = std::vector<std::string>{"-1", "0", "0", "0"};
    s.ranges = {{1, 2}, {0, 1}, {0, 1}, {0, 1}};
    s.basepoint = ChartPoint{1, 0.5, 0.5, 0.5};
    CatalogExpectation e;
    e.fluid = FluidStatus::EinsteinDegenerate;
    e.hypotheses_hold = false;
    e.verdict = false;
    e.closed_forms = {{"Ricci", "0"}};
    e.summary = "vacuum Kasner with exponents (-1/3, 2/3, 2/3): Ricci-flat, so no fluid velocity exists; "
                "conclusions are informational and the electric-Weyl check fails";
    auto chart = compile_chart(s);
    return {std::move(s), std::move(chart), std::move(e)};
}

}  // namespace

std::vector<std::string> catalog_names()
{
    return {"minkowski", "desitter", "einstein-static", "frw-dust", "frw-rad", "frw-k+1", "frw-k-1",
            "grw5-sphere", "grw-nonEinstein-fiber", "kasner-negative"};
}

CatalogEntry catalog_get(const std::string& name)
{
    CatalogExpectation e;
    e.fiber_einstein = true;
    if (name == "minkowski") {
        e.fluid = FluidStatus::EinsteinDegenerate;
        e.hypotheses_hold = false;
        e.verdict = false;
        e.closed_forms = {{"A", "0"}, {"B", "0"}};
        e.summary = "flat space: every curvature object vanishes; B = 0 leaves u undetermined";
        return grw_entry(name, {"1", {1, 2}}, flat3(), e);
    }
    if (name == "desitter") {
        e.fluid = FluidStatus::EinsteinDegenerate;
        e.hypotheses_hold = false;
        e.verdict = false;
        e.closed_forms = {{"A", "3"}, {"B", "0"}, {"mu", "3"}, {"p", "-3"}};
        e.summary = "Einstein space Ricci = 3g: degenerate branch, A verified, no u emitted";
        return grw_entry(name, {"exp(t)", {-0.5, 0.5}}, flat3(), e);
    }
    if (name == "einstein-static") {
        e.closed_forms = {{"A", "2"}, {"B", "2"}, {"mu", "3"}, {"p", "-1"}, {"f", "0"}, {"rho", "0"}};
        e.summary = "static universe with unit S^3 fiber: homothetic branch, p = -mu/3";
        return grw_entry(name, {"1", {0, 1}}, sphere3(), e);
    }
    if (name == "frw-dust") {
        e.closed_forms = {{"A", "2/(3 t^2)"}, {"B", "4/(3 t^2)"}, {"mu", "4/(3 t^2)"}, {"p", "0"},
                          {"f", "2/(3 t)"}, {"rho", "(2/3) t^(-1/3)"}};
        e.summary = "Einstein-de Sitter dust, q = t^(2/3), flat fiber: every check passes, p = 0";
        return grw_entry(name, {"t^(2/3)", {1, 2}}, flat3(), e);
    }
    if (name == "frw-rad") {
        e.closed_forms = {{"A", "1/(4 t^2)"}, {"B", "1/t^2"}, {"mu", "3/(4 t^2)"}, {"p", "1/(4 t^2)"},
                          {"w", "1/3"}};
        e.summary = "radiation FRW, q = t^(1/2), flat fiber: w = 1/3";
        return grw_entry(name, {"t^(1/2)", {1, 2}}, flat3(), e);
    }
    if (name == "frw-k+1") {
        e.closed_forms = {{"A", "4/t^2"}, {"B", "4/t^2"}, {"R*", "6"}};
        e.summary = "closed FRW with q = t and unit S^3 fiber: A = B, homothetic branch";
        return grw_entry(name, {"t", {1, 2}}, sphere3(), e);
    }
    if (name == "frw-k-1") {
        e.closed_forms = {{"A", "(10 t^2 - 2)/t^4"}, {"B", "(4 t^2 - 2)/t^4"}, {"R*", "-6"}};
        e.summary = "open FRW with q = t^2 and unit H^3 fiber";
        return grw_entry(name, {"t^2", {1, 2}}, hyperbolic3(), e);
    }
    if (name == "grw5-sphere") {
        e.closed_forms = {{"A", "(3 + 14 t^2)/t^4"}, {"B", "(3 + 6 t^2)/t^4"}, {"R*", "12"}};
        e.summary = "n = 5 GRW with q = t^2 and unit S^4 fiber: the converse formulas hold";
        auto entry = grw_entry(name, {"t^2", {0.8, 1.6}}, sphere4(), e);
        entry.spec.basepoint->at(0) = 1.0;
        entry.chart = compile_chart(entry.spec);
        return entry;
    }
    if (name == "grw-nonEinstein-fiber") {
        e.fluid = FluidStatus::Unclustered;
        e.hypotheses_hold = false;
        e.verdict = false;
        e.fiber_einstein = false;
        e.closed_forms = {{"fiber Ricci (orthonormal)", "diag(1, 1, 0)"}, {"R*", "2"}};
        e.summary = "q = t over S^2 x S^1: the fiber is not Einstein, Weyl divergence and the fluid form fail";
        return grw_entry(name, {"t", {1, 2}}, sphere2_circle(), e);
    }
    if (name == "kasner-negative") return kasner();
    throw UnknownCatalogEntry(name);
}

}  // namespace grwcert
