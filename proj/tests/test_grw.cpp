#include <doctest.h>

#include <cmath>
#include <functional>

#include "grwcert/error.hpp"
#include "grwcert/grw.hpp"
#include "test_support.hpp"

using namespace grwcert;

namespace {

ChartSpec flat_fiber()
{
    return testing_support::diagonal_spec("R3", {"x", "y", "z"}, {"1", "1", "1"}, {{0, 1}, {0, 1}, {0, 1}},
                                          Signature::Riemannian);
}

ChartSpec unit_s3()
{
    auto s = testing_support::diagonal_spec("S3", {"chi", "theta", "phi"},
                                            {"1", "sin(chi)^2", "sin(chi)^2*sin(theta)^2"},
                                            {{0.3, 2.8}, {0.3, 2.8}, {0, 6}}, Signature::Riemannian);
    return s;
}

// Closed-form A, B of the Einstein-fiber catalog entries, assembled from the
// warped-product Ricci tensor by hand.
struct ClosedForm {
    const char* name;
    std::function<double(double)> A, B;
};

const ClosedForm kClosedForms[] = {
    {"einstein-static", [](double) { return 2.0; }, [](double) { return 2.0; }},
    {"frw-dust", [](double t) { return 2.0 / (3 * t * t); }, [](double t) { return 4.0 / (3 * t * t); }},
    {"frw-rad", [](double t) { return 1.0 / (4 * t * t); }, [](double t) { return 1.0 / (t * t); }},
    {"frw-k+1", [](double t) { return 4.0 / (t * t); }, [](double t) { return 4.0 / (t * t); }},
    {"frw-k-1", [](double t) { return (10 * t * t - 2) / std::pow(t, 4); },
     [](double t) { return (4 * t * t - 2) / std::pow(t, 4); }},
    {"grw5-sphere", [](double t) { return (3 + 14 * t * t) / std::pow(t, 4); },
     [](double t) { return (3 + 6 * t * t) / std::pow(t, 4); }},
};

}  // namespace

TEST_CASE("build_grw")
{
    SUBCASE("q = 1 over flat space is Minkowski")
    {
        const auto chart = build_grw("flat", {"1", {0, 1}}, flat_fiber());
        for (const auto& p : sample_points(chart, 5, 1)) {
            const auto cp = curvature_at(chart, p);
            CHECK(max_abs(cp.riemann) < 1e-12);
            CHECK(max_abs(cp.riemann_derivative.data()) < 1e-12);
        }
    }
    SUBCASE("q = e^t over flat space is de Sitter")
    {
        const auto chart = build_grw("dS", {"exp(t)", {-0.5, 0.5}}, flat_fiber());
        for (const auto& p : sample_points(chart, 5, 1)) {
            const auto cp = curvature_at(chart, p);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) CHECK(std::abs(cp.ric(i, j) - 3 * cp.g(i, j)) < 1e-9);
        }
    }
    SUBCASE("q = 1 over S^3 is the Einstein static universe")
    {
        const auto chart = build_grw("ES", {"1", {0, 1}}, unit_s3());
        const auto fd = fluid_decompose(curvature_at(chart, chart.probe_point()));
        REQUIRE(fd.ok());
        CHECK(fd.A == doctest::Approx(2.0));
        CHECK(fd.B == doctest::Approx(2.0));
    }
    SUBCASE("adapted layout")
    {
        const auto chart = build_grw("g", {"t^2", {1, 2}}, unit_s3());
        CHECK(chart.coordinates() == std::vector<std::string>{"t", "chi", "theta", "phi"});
        const auto g = chart.metric_values(std::vector<double>{1.5, 1.0, 1.0, 1.0});
        CHECK(g(0, 0) == -1.0);
        CHECK(g(0, 2) == 0.0);
        CHECK(g(2, 2) == doctest::Approx(std::pow(1.5, 4) * std::pow(std::sin(1.0), 2)));
    }
    SUBCASE("failures")
    {
        CHECK_THROWS_AS(build_grw("neg", {"t", {-1, 1}}, flat_fiber()), ChartError);
        auto lorentz = flat_fiber();
        lorentz.signature = Signature::Lorentzian;
        CHECK_THROWS_AS(build_grw("bad", {"1", {0, 1}}, lorentz), ChartError);
        CHECK_THROWS_AS(build_grw("xdep", {"t*x", {1, 2}}, flat_fiber()), UnknownIdentifier);
    }
}

TEST_CASE("fiber_einstein_check")
{
    SUBCASE("unit S^3: R* = 6")
    {
        const auto f = compile_chart(unit_s3());
        const auto pts = sample_points(f, 10, 2);
        CHECK(fiber_einstein_check(f, pts).scaled < 1e-10);
        for (const auto& p : pts) CHECK(curvature_at(f, p).R() == doctest::Approx(6.0).epsilon(1e-10));
    }
    SUBCASE("flat")
    {
        const auto f = compile_chart(flat_fiber());
        CHECK(fiber_einstein_check(f, sample_points(f, 3, 2)).raw == 0.0);
    }
    SUBCASE("S^2 x S^1")
    {
        // Orthonormal Ricci diag(1, 1, 0), R* = 2: the zz entry misses by 2/3.
        const auto entry = catalog_get("grw-nonEinstein-fiber");
        const auto f = fiber_chart(entry.chart);
        for (const auto& p : sample_points(f, 10, 2)) {
            const auto r = fiber_einstein_check(f, std::vector<ChartPoint>{p});
            CHECK(r.raw == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
            CHECK(r.scaled >= 0.3);
        }
    }
}

TEST_CASE("converse_check")
{
    SUBCASE("Einstein static: A = B = 2")
    {
        const auto rep = converse_check(catalog_get("einstein-static").chart,
                                        sample_points(catalog_get("einstein-static").chart, 5, 3));
        for (const auto& c : rep.points) {
            CHECK(c.A_formula == doctest::Approx(2.0).epsilon(1e-12));
            CHECK(c.B_formula == doctest::Approx(2.0).epsilon(1e-12));
        }
        CHECK(rep.A.scaled < 1e-9);
        CHECK(rep.B.scaled < 1e-9);
        CHECK_FALSE(rep.degenerate);
    }
    SUBCASE("de Sitter at t = 0: degenerate, A = 3")
    {
        const auto chart = catalog_get("desitter").chart;
        const auto rep = converse_check(chart, std::vector<ChartPoint>{{0.0, 0.5, 0.5, 0.5}});
        CHECK(rep.degenerate);
        CHECK(rep.points[0].A_formula == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(rep.points[0].A_computed == doctest::Approx(3.0).epsilon(1e-9));
        CHECK(rep.B.raw == 0.0);
    }
    SUBCASE("grw5-sphere: q''/q variant agrees, q'/q variant does not away from t = 1")
    {
        const auto chart = catalog_get("grw5-sphere").chart;
        const ChartPoint at1{1.0, 1.0, 1.2, 1.4, 0.5};
        const auto r1 = converse_check(chart, std::vector<ChartPoint>{at1});
        CHECK(r1.points[0].A_formula == doctest::Approx(17.0).epsilon(1e-12));
        CHECK(r1.points[0].B_formula == doctest::Approx(9.0).epsilon(1e-12));
        CHECK(r1.A.scaled < 1e-8);
        CHECK(r1.B.scaled < 1e-8);

        const ChartPoint later{1.5, 1.0, 1.2, 1.4, 0.5};
        const auto r2 = converse_check(chart, std::vector<ChartPoint>{later});
        CHECK(r2.B.scaled < 1e-8);
        CHECK(r2.B_printed_gap.scaled > 0.1);
    }
}

TEST_CASE("catalog")
{
    SUBCASE("every name resolves")
    {
        for (const auto& name : catalog_names()) {
            const auto e = catalog_get(name);
            CHECK(e.chart.name() == name);
            CHECK(e.spec.velocity_field.has_value());
            CHECK(e.spec.basepoint.has_value());
        }
        CHECK_THROWS_AS(catalog_get("nope"), UnknownCatalogEntry);
    }
    SUBCASE("frw-dust shape")
    {
        const auto e = catalog_get("frw-dust");
        CHECK(e.chart.dim() == 4);
        CHECK(e.spec.warped_product->warp == "t^(2/3)");
        CHECK(e.expected.verdict);
        CHECK(e.expected.closed_forms.at("p") == "0");
    }
    SUBCASE("expected fluid status matches the decomposition")
    {
        for (const auto& name : catalog_names()) {
            const auto e = catalog_get(name);
            INFO(name);
            for (const auto& p : sample_points(e.chart, 3, 5))
                CHECK(fluid_decompose(curvature_at(e.chart, p)).status == e.expected.fluid);
        }
    }
}

TEST_CASE("Einstein-fiber catalog entries: Weyl divergence vanishes and the converse formulas hold")
{
    for (const auto& cf : kClosedForms) {
        INFO(cf.name);
        const auto e = catalog_get(cf.name);
        const auto pts = sample_points(e.chart, 20, 11);
        const auto rep = converse_check(e.chart, pts);
        CHECK(rep.A.scaled < 1e-8);
        CHECK(rep.B.scaled < 1e-8);
        CHECK(rep.fiber_einstein.scaled < 1e-10);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double t = pts[i][0];
            CHECK(div_weyl_residual(curvature_at(e.chart, pts[i])).scaled < 1e-8);
            CHECK(rep.points[i].A_computed == doctest::Approx(cf.A(t)).epsilon(1e-8));
            CHECK(rep.points[i].B_computed == doctest::Approx(cf.B(t)).epsilon(1e-8));
        }
    }
}

TEST_CASE("non-Einstein fiber: Weyl divergence is far from zero")
{
    const auto e = catalog_get("grw-nonEinstein-fiber");
    const auto pts = sample_points(e.chart, 50, 1);
    int large = 0;
    for (const auto& p : pts) large += div_weyl_residual(curvature_at(e.chart, p)).scaled > 10 * 1e-7;
    CHECK(large >= 45);
}
