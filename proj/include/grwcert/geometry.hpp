#pragma once

// Jet-level tensor algebra shared by the curvature engine and the field checks.

#include <cmath>
#include <utility>
#include <vector>

#include "grwcert/error.hpp"
#include "grwcert/jet.hpp"
#include "grwcert/tensor.hpp"

namespace grwcert {

/// Matrix inverse in jet arithmetic (Gauss-Jordan, partial pivoting on values).
template <int O>
Tensor<Jet<O>, 2> invert(const Tensor<Jet<O>, 2>& m)
{
    const int n = m.dim();
    const int jd = n > 0 ? m(0, 0).dim() : 0;
    Tensor<Jet<O>, 2> a = m;
    Tensor<Jet<O>, 2> inv(n, Jet<O>(jd, 0.0));
    for (int i = 0; i < n; ++i) inv(i, i) = Jet<O>(jd, 1.0);

    double scale = 0.0;
    for (const auto& x : m.data()) scale = std::max(scale, std::abs(x.value()));

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col).value()) > std::abs(a(pivot, col).value())) pivot = r;
        if (std::abs(a(pivot, col).value()) <= 1e-13 * std::max(scale, 1e-300))
            throw ChartError("metric is not invertible");
        if (pivot != col)
            for (int c = 0; c < n; ++c) {
                std::swap(a(pivot, c), a(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        const Jet<O> r = reciprocal(a(col, col));
        for (int c = 0; c < n; ++c) {
            a(col, c) = a(col, c) * r;
            inv(col, c) = inv(col, c) * r;
        }
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            const Jet<O> f = a(row, col);
            if (f.max_abs() == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a(row, c) -= f * a(col, c);
                inv(row, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

template <int O, int M>
Tensor<Jet<M>, 2> truncate(const Tensor<Jet<O>, 2>& t)
{
    Tensor<Jet<M>, 2> r(t.dim());
    for (std::size_t s = 0; s < t.size(); ++s) r.data()[s] = t.data()[s].template truncate<M>();
    return r;
}

/// Levi-Civita connection Gamma^m_{jk}, stored at (m, j, k).
template <int O>
Tensor<Jet<O>, 3> christoffel(const Tensor<Jet<O + 1>, 2>& g, const Tensor<Jet<O>, 2>& ginv)
{
    const int n = g.dim();
    const int jd = g(0, 0).dim();
    Tensor<Jet<O>, 3> dg(n);  // (k, i, j) -> d_k g_ij
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                dg(k, i, j) = g(i, j).partial(k);
                dg(k, j, i) = dg(k, i, j);
            }
    Tensor<Jet<O>, 3> first(n);  // Gamma_{l j k}
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                first(l, j, k) = 0.5 * (dg(j, l, k) + dg(k, l, j) - dg(l, j, k));
                first(l, k, j) = first(l, j, k);
            }
    Tensor<Jet<O>, 3> gamma(n, Jet<O>(jd, 0.0));
    for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                Jet<O> acc(jd, 0.0);
                for (int l = 0; l < n; ++l) acc += ginv(m, l) * first(l, j, k);
                gamma(m, j, k) = acc;
                gamma(m, k, j) = acc;
            }
    return gamma;
}

/// nabla_k v_j of a covector, stored at (k, j).
template <int O>
Tensor<Jet<O>, 2> covector_derivative(const std::vector<Jet<O + 1>>& v, const Tensor<Jet<O>, 3>& gamma)
{
    const int n = gamma.dim();
    Tensor<Jet<O>, 2> dv(n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            Jet<O> acc = v[j].partial(k);
            for (int s = 0; s < n; ++s) acc -= gamma(s, k, j) * v[s].template truncate<O>();
            dv(k, j) = acc;
        }
    return dv;
}

template <int O, int P>
std::vector<Jet<O>> contract(const Tensor<Jet<P>, 2>& m, const std::vector<Jet<O>>& v)
{
    const int n = m.dim();
    std::vector<Jet<O>> r(n, Jet<O>(v.empty() ? 0 : v[0].dim(), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i] += m(i, j).template truncate<O>() * v[j];
    return r;
}

template <int O>
std::vector<Jet<O>> truncate(const std::vector<Jet<O + 1>>& v)
{
    std::vector<Jet<O>> r;
    r.reserve(v.size());
    for (const auto& x : v) r.push_back(x.template truncate<O>());
    return r;
}

template <int O>
std::vector<double> values(const std::vector<Jet<O>>& v)
{
    std::vector<double> r;
    r.reserve(v.size());
    for (const auto& x : v) r.push_back(x.value());
    return r;
}

template <int O>
Tensor<double, 2> values(const Tensor<Jet<O>, 2>& t)
{
    Tensor<double, 2> r(t.dim());
    for (std::size_t s = 0; s < t.size(); ++s) r.data()[s] = t.data()[s].value();
    return r;
}

}  // namespace grwcert
