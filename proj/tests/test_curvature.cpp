#include <doctest.h>

#include <cmath>
#include <set>

#include "grwcert/curvature.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace grwcert;
using testing_support::diagonal_spec;

namespace {

ChartSpec generic4()
{
    ChartSpec s = diagonal_spec("generic", {"t", "x", "y", "z"},
                                {"-(1 + 0.1*x^2)", "1 + 0.2*t*y", "1 + 0.1*sin(z)", "1 + 0.05*x^2*t"},
                                {{0.5, 1.0}, {0.2, 0.8}, {0.2, 0.8}, {0.2, 0.8}});
    s.metric[{0, 1}] = "0.1*x*y";
    s.metric[{2, 3}] = "0.05*t";
    s.metric[{1, 3}] = "0.03*sin(t*z)";
    return s;
}

ChartSpec generic5()
{
    ChartSpec s = diagonal_spec("generic5", {"t", "a", "b", "c", "d"},
                                {"-(1 + 0.1*a*b)", "1 + 0.2*t^2", "exp(0.1*c)", "1 + 0.1*cos(d)*t", "1 + 0.05*a^2"},
                                {{0.5, 1.0}, {0.2, 0.8}, {0.2, 0.8}, {0.2, 0.8}, {0.2, 0.8}});
    s.metric[{0, 2}] = "0.07*d";
    s.metric[{1, 4}] = "0.04*t*b";
    return s;
}

}  // namespace

TEST_CASE("compile_chart")
{
    SUBCASE("Minkowski is lorentzian")
    {
        CHECK_NOTHROW(compile_chart(testing_support::minkowski4()));
    }
    SUBCASE("round sphere is riemannian")
    {
        auto s = diagonal_spec("S3", {"chi", "theta", "phi"}, {"1", "sin(chi)^2", "sin(chi)^2*sin(theta)^2"},
                               {{0.3, 2.8}, {0.3, 2.8}, {0, 6}}, Signature::Riemannian);
        CHECK_NOTHROW(compile_chart(s));
        s.signature = Signature::Lorentzian;
        CHECK_THROWS_AS(compile_chart(s), ChartError);
    }
    SUBCASE("degenerate metric")
    {
        auto s = diagonal_spec("deg", {"t", "x", "y", "z"}, {"0", "1", "1", "1"}, {{1, 2}, {0, 1}, {0, 1}, {0, 1}});
        try {
            compile_chart(s);
            FAIL("expected a non-invertible error");
        } catch (const ChartError& e) {
            CHECK(std::string(e.what()).find("not invertible") != std::string::npos);
        }
    }
    SUBCASE("lower-triangle keys are rejected")
    {
        auto s = testing_support::minkowski4();
        s.metric[{1, 0}] = "0";
        CHECK_THROWS_AS(compile_chart(s), ChartError);
    }
}

TEST_CASE("sample_points")
{
    const auto chart = compile_chart(testing_support::flat_grw4("t^(2/3)", {1, 2}));
    SUBCASE("deterministic for a fixed seed")
    {
        CHECK(sample_points(chart, 5, 7) == sample_points(chart, 5, 7));
        CHECK(sample_points(chart, 5, 7) != sample_points(chart, 5, 8));
    }
    SUBCASE("distinct points inside the box")
    {
        const auto pts = sample_points(chart, 100, 3);
        CHECK(std::set<ChartPoint>(pts.begin(), pts.end()).size() == 100);
        for (const auto& p : pts) {
            CHECK(p[0] >= 1.0);
            CHECK(p[0] <= 2.0);
        }
    }
    SUBCASE("exclusions are honoured")
    {
        auto s = testing_support::sphere2();
        s.exclusions.push_back({"sin(theta)", 0.5});
        const auto sph = compile_chart(s);
        for (const auto& p : sample_points(sph, 50, 1)) CHECK(std::sin(p[0]) > 0.5);
    }
    SUBCASE("unsatisfiable exclusion exhausts")
    {
        auto s = diagonal_spec("neg", {"t", "x", "y", "z"}, {"-1", "1", "1", "1"},
                               {{-1, -0.5}, {0, 1}, {0, 1}, {0, 1}});
        s.exclusions.push_back({"t", 0.0});
        s.basepoint = ChartPoint{-0.75, 0.5, 0.5, 0.5};
        CHECK_THROWS_AS(sample_points(compile_chart(s), 3, 1), SamplingExhausted);
    }
}

TEST_CASE("flat space has no curvature")
{
    const auto chart = compile_chart(testing_support::minkowski4());
    for (const auto& p : sample_points(chart, 5, 2)) {
        const auto cp = curvature_at(chart, p);
        CHECK(max_abs(cp.riemann) < 1e-12);
        CHECK(max_abs(cp.ricci) < 1e-12);
        CHECK(max_abs(cp.weyl) < 1e-12);
        CHECK(max_abs(cp.div_weyl.data()) < 1e-12);
    }
}

TEST_CASE("convention pin: unit S^2 has R = 2")
{
    const auto chart = compile_chart(testing_support::sphere2());
    for (const auto& p : sample_points(chart, 10, 4)) {
        const double expected = oracle::sphere2_scalar(p[0]);
        CHECK(expected == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(std::abs(curvature_at(chart, p).R() - 2.0) < 1e-10);
    }
}

TEST_CASE("convention pin: de Sitter Ricci = 3g against the hand-coded connection")
{
    const auto chart = compile_chart(testing_support::flat_grw4("exp(t)", {-0.5, 0.5}));
    for (const auto& p : sample_points(chart, 10, 5)) {
        const auto cp = curvature_at(chart, p);
        const double q = std::exp(p[0]);
        const auto ref = oracle::ricci(oracle::grw_flat_connection(4, q, q, q));
        const auto g = oracle::grw_flat_metric(4, q);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                CHECK(ref[i][j] == doctest::Approx(3.0 * g[i][j]).epsilon(1e-12));
                CHECK(std::abs(cp.ric(i, j) - 3.0 * g[i][j]) <= 1e-9 * (1.0 + 3.0 * std::abs(g[i][j])));
            }
    }
}

TEST_CASE("GRW q = t^2: engine Ricci matches the hand-coded connection; R_tt = -3 q''/q")
{
    const auto chart = compile_chart(testing_support::flat_grw4("t^2", {0.5, 3.0}));
    for (double t : {0.7, 2.0, 2.5}) {
        const ChartPoint p{t, 0.3, 0.4, 0.5};
        const auto cp = curvature_at(chart, p);
        const double q = t * t, dq = 2 * t, ddq = 2.0;
        const auto ref = oracle::ricci(oracle::grw_flat_connection(4, q, dq, ddq));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(cp.ric(i, j) == doctest::Approx(ref[i][j]).epsilon(1e-11));
        // Distinguishes the q''/q and q'/q readings of R_tt: at t = 2 they are -1.5 and -3.
        CHECK(ref[0][0] == doctest::Approx(-3.0 * ddq / q));
        if (t == 2.0) CHECK(std::abs(ref[0][0] - (-3.0 * dq / q)) > 1.0);
    }
}

TEST_CASE("Riemann and Weyl symmetries on generic metrics")
{
    for (const auto& spec : {generic4(), generic5()}) {
        const auto chart = compile_chart(spec);
        for (const auto& p : sample_points(chart, 4, 9)) {
            const auto cp = curvature_at(chart, p);
            CHECK(max_abs(cp.riemann) > 1e-3);
            CHECK(first_bianchi_residual(cp).scaled < 1e-10);
            CHECK(second_bianchi_residual(cp).scaled < 1e-9);
            CHECK(weyl_trace_residual(cp).scaled < 1e-10);
            CHECK(ricci_symmetry_residual(cp).raw < 1e-12);
            const int n = cp.n;
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        for (int m = 0; m < n; ++m) {
                            const double r = cp.riemann_low(j, k, l, m).value();
                            CHECK(std::abs(r + cp.riemann_low(j, k, m, l).value()) < 1e-11);
                            CHECK(std::abs(r - cp.riemann_low(l, m, j, k).value()) < 1e-11);
                        }
        }
    }
}

TEST_CASE("Weyl divergence is a fixed multiple of the Cotton combination")
{
    // Measure the ratio on generic metrics, then check it is dimension-only.
    for (const auto& spec : {generic4(), generic5()}) {
        const auto chart = compile_chart(spec);
        const int n = chart.dim();
        double ratio = 0.0;
        int samples = 0;
        for (const auto& p : sample_points(chart, 3, 13)) {
            const auto cp = curvature_at(chart, p);
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        const double K = cotton(cp, l, k, j);
                        if (std::abs(K) < 1e-2) continue;
                        const double r = cp.div_weyl(j, k, l) / K;
                        if (samples == 0) ratio = r;
                        CHECK(r == doctest::Approx(ratio).epsilon(1e-8));
                        ++samples;
                    }
            CHECK(div_weyl_cotton_residual(cp).scaled < 1e-8);
        }
        REQUIRE(samples > 10);
        MESSAGE("n = " << n << ": div Weyl / Cotton = " << ratio);
        CHECK(ratio == doctest::Approx(cotton_coefficient(n)).epsilon(1e-8));
    }
}

TEST_CASE("grad_vector_at")
{
    SUBCASE("constant field on Minkowski")
    {
        const auto chart = compile_chart(testing_support::minkowski4());
        const auto u = VectorField::closed_form(chart, {"-1", "0", "0", "0"});
        const auto gv = grad_vector_at(chart, u, ChartPoint{1.5, 0.2, 0.3, 0.4});
        CHECK(max_abs(gv.nabla) == 0.0);
    }
    SUBCASE("comoving field on GRW: nabla_k u_j = (q'/q)(g_kj + u_k u_j)")
    {
        const auto chart = compile_chart(testing_support::flat_grw4("t^2", {0.5, 3.0}));
        const auto u = VectorField::closed_form(chart, {"-1", "0", "0", "0"});
        const double t = 1.7;
        const auto gv = grad_vector_at(chart, u, ChartPoint{t, 0.2, 0.3, 0.4});
        const auto g = oracle::grw_flat_metric(4, t * t);
        const double h = 2.0 / t;
        const double uc[4] = {-1, 0, 0, 0};
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j)
                CHECK(gv.nabla(k, j).value() == doctest::Approx(h * (g[k][j] + uc[k] * uc[j])).epsilon(1e-12));
        CHECK(gv.curl_mismatch < 1e-14);
    }
    SUBCASE("curl of (-1, t, 0, 0)")
    {
        const auto chart = compile_chart(testing_support::minkowski4());
        const auto v = VectorField::closed_form(chart, {"-1", "t", "0", "0"});
        const auto gv = grad_vector_at(chart, v, ChartPoint{1.2, 0.5, 0.5, 0.5});
        CHECK(gv.nabla(0, 1).value() - gv.nabla(1, 0).value() == doctest::Approx(1.0));
    }
    SUBCASE("pointwise fields are rejected")
    {
        const auto chart = compile_chart(testing_support::minkowski4());
        const auto v = VectorField::pointwise([](std::span<const double>) { return std::vector<double>{-1, 0, 0, 0}; });
        CHECK_THROWS_AS(grad_vector_at(chart, v, ChartPoint{1.2, 0.5, 0.5, 0.5}), NotDifferentiable);
    }
}
