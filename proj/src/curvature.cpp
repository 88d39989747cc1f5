#include "grwcert/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "grwcert/geometry.hpp"

namespace grwcert {

CurvaturePoint curvature_at(const MetricChart& chart, std::span<const double> p)
{
    const int n = chart.dim();
    CurvaturePoint cp;
    cp.n = n;
    cp.point.assign(p.begin(), p.end());

    cp.metric = chart.metric_jets<3>(p);
    cp.inverse = invert(truncate<3, 2>(cp.metric));
    cp.christoffel = christoffel<2>(cp.metric, cp.inverse);

    Tensor<Jet<1>, 3> gamma1(n);
    for (std::size_t s = 0; s < gamma1.size(); ++s) gamma1.data()[s] = cp.christoffel.data()[s].truncate<1>();
    const auto g1 = truncate<3, 1>(cp.metric);
    const auto ginv1 = truncate<2, 1>(cp.inverse);

    // R_{jkl}^m = d_k Gamma^m_{jl} - d_j Gamma^m_{kl} + Gamma^m_{ks} Gamma^s_{jl} - Gamma^m_{js} Gamma^s_{kl}
    cp.riemann = Tensor<Jet<1>, 4>(n, Jet<1>(n, 0.0));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    Jet<1> r = cp.christoffel(m, j, l).partial(k) - cp.christoffel(m, k, l).partial(j);
                    for (int s = 0; s < n; ++s) r += gamma1(m, k, s) * gamma1(s, j, l) - gamma1(m, j, s) * gamma1(s, k, l);
                    cp.riemann(j, k, l, m) = r;
                    cp.riemann(k, j, l, m) = -r;
                }

    cp.riemann_low = Tensor<Jet<1>, 4>(n, Jet<1>(n, 0.0));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    Jet<1> acc(n, 0.0);
                    for (int s = 0; s < n; ++s) acc += cp.riemann(j, k, l, s) * g1(s, m);
                    cp.riemann_low(j, k, l, m) = acc;
                }

    cp.ricci = Tensor<Jet<1>, 2>(n, Jet<1>(n, 0.0));
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            Jet<1> acc(n, 0.0);
            for (int m = 0; m < n; ++m) acc += cp.riemann(k, m, l, m);
            cp.ricci(k, l) = acc;
        }
    cp.scalar = Jet<1>(n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) cp.scalar += ginv1(k, l) * cp.ricci(k, l);

    // C_{jklm} = R_{jklm} + (g_jm R_kl - g_km R_jl + R_jm g_kl - R_km g_jl)/(n-2)
    //            - (g_jm g_kl - g_km g_jl) R / ((n-1)(n-2))
    cp.weyl = Tensor<Jet<1>, 4>(n, Jet<1>(n, 0.0));
    if (n >= 3) {
        const double c1 = 1.0 / (n - 2);
        const double c2 = 1.0 / ((n - 1.0) * (n - 2.0));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m) {
                        const auto& R = cp.ricci;
                        Jet<1> c = cp.riemann_low(j, k, l, m);
                        c += c1 * (g1(j, m) * R(k, l) - g1(k, m) * R(j, l) + R(j, m) * g1(k, l) - R(k, m) * g1(j, l));
                        c -= c2 * (g1(j, m) * g1(k, l) - g1(k, m) * g1(j, l)) * cp.scalar;
                        cp.weyl(j, k, l, m) = c;
                    }
    }

    // Covariant derivatives at order 0.
    cp.scalar_gradient.assign(n, 0.0);
    for (int j = 0; j < n; ++j) cp.scalar_gradient[j] = cp.scalar.d(j);

    cp.ricci_derivative = Tensor<double, 3>(n, 0.0);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                double v = cp.ricci(j, l).d(k);
                for (int s = 0; s < n; ++s)
                    v -= cp.gamma(s, k, j) * cp.ric(s, l) + cp.gamma(s, k, l) * cp.ric(j, s);
                cp.ricci_derivative(k, j, l) = v;
            }

    auto nabla4 = [&](const Tensor<Jet<1>, 4>& T) {
        Tensor<double, 5> out(n, 0.0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        for (int e = 0; e < n; ++e) {
                            double v = T(b, c, d, e).d(a);
                            for (int s = 0; s < n; ++s) {
                                v -= cp.gamma(s, a, b) * T(s, c, d, e).value();
                                v -= cp.gamma(s, a, c) * T(b, s, d, e).value();
                                v -= cp.gamma(s, a, d) * T(b, c, s, e).value();
                                v -= cp.gamma(s, a, e) * T(b, c, d, s).value();
                            }
                            out(a, b, c, d, e) = v;
                        }
        return out;
    };

    cp.riemann_derivative = nabla4(cp.riemann_low);
    const auto weyl_derivative = nabla4(cp.weyl);
    cp.div_weyl = Tensor<double, 3>(n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                double v = 0.0;
                for (int m = 0; m < n; ++m)
                    for (int q = 0; q < n; ++q) v += cp.ginv(m, q) * weyl_derivative(m, j, k, l, q);
                cp.div_weyl(j, k, l) = v;
            }
    return cp;
}

Residual first_bianchi_residual(const CurvaturePoint& cp)
{
    const int n = cp.n;
    double raw = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    const double s = cp.riemann(j, k, l, m).value() + cp.riemann(k, l, j, m).value() +
                                     cp.riemann(l, j, k, m).value();
                    raw = std::max(raw, std::abs(s));
                }
    return Residual::of(raw, max_abs(cp.riemann));
}

Residual second_bianchi_residual(const CurvaturePoint& cp)
{
    const int n = cp.n;
    const auto& D = cp.riemann_derivative;
    double raw = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    for (int e = 0; e < n; ++e)
                        raw = std::max(raw, std::abs(D(a, b, c, d, e) + D(b, c, a, d, e) + D(c, a, b, d, e)));
    return Residual::of(raw, max_abs(D));
}

Residual weyl_trace_residual(const CurvaturePoint& cp)
{
    const int n = cp.n;
    double raw = 0.0;
    // All six slot pairs; the (0,1) and (2,3) traces vanish by antisymmetry.
    static constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (const auto& pr : pairs) {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                double acc = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        int idx[4];
                        idx[pr[0]] = a;
                        idx[pr[1]] = b;
                        int free_slot = 0;
                        for (int s = 0; s < 4; ++s)
                            if (s != pr[0] && s != pr[1]) idx[s] = (free_slot++ == 0) ? x : y;
                        acc += cp.ginv(a, b) * cp.weyl(idx[0], idx[1], idx[2], idx[3]).value();
                    }
                raw = std::max(raw, std::abs(acc));
            }
    }
    return Residual::of(raw, max_abs(cp.riemann_low));
}

Residual ricci_symmetry_residual(const CurvaturePoint& cp)
{
    double raw = 0.0;
    for (int j = 0; j < cp.n; ++j)
        for (int l = 0; l < cp.n; ++l) raw = std::max(raw, std::abs(cp.ric(j, l) - cp.ric(l, j)));
    return Residual::of(raw, max_abs(cp.ricci));
}

Residual div_weyl_residual(const CurvaturePoint& cp)
{
    return Residual::of(max_abs(cp.div_weyl.data()), max_abs(cp.riemann_derivative.data()));
}

double cotton(const CurvaturePoint& cp, int j, int k, int l)
{
    const double n = cp.n;
    return cp.ricci_derivative(k, j, l) - cp.ricci_derivative(l, j, k) -
           (cp.g(j, l) * cp.scalar_gradient[k] - cp.g(j, k) * cp.scalar_gradient[l]) / (2.0 * (n - 1.0));
}

double cotton_coefficient(int n) { return (n - 3.0) / (n - 2.0); }

Residual div_weyl_cotton_residual(const CurvaturePoint& cp)
{
    const int n = cp.n;
    const double c = cotton_coefficient(n);
    double raw = 0.0, scale = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                const double rhs = c * cotton(cp, l, k, j);
                raw = std::max(raw, std::abs(cp.div_weyl(j, k, l) - rhs));
                scale = std::max({scale, std::abs(rhs), std::abs(cp.div_weyl(j, k, l))});
            }
    return Residual::of(raw, std::max(scale, max_abs(cp.riemann_derivative.data())));
}

VectorGradient grad_vector_at(const MetricChart& chart, const VectorField& v, std::span<const double> p)
{
    if (!v.differentiable()) throw NotDifferentiable("pointwise vector field cannot be differentiated");
    const int n = chart.dim();
    const auto g = chart.metric_jets<2>(p);
    const auto ginv = invert(truncate<2, 1>(g));
    const auto gamma = christoffel<1>(g, ginv);
    const auto comp = v.covariant_jets<2>(chart, p);

    VectorGradient out;
    out.nabla = covector_derivative<1>(comp, gamma);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const double cov = out.nabla(k, j).value() - out.nabla(j, k).value();
            const double par = comp[j].d(k) - comp[k].d(j);
            out.curl_mismatch = std::max(out.curl_mismatch, std::abs(cov - par));
        }
    return out;
}

}  // namespace grwcert
