#pragma once

/// Truncated multivariate Taylor jets.
///
/// A `Jet<Order>` holds a scalar together with every partial derivative up to
/// total order `Order` (at most 3) with respect to the `dim()` chart
/// coordinates. Mixed partials are stored once: the Hessian in n(n+1)/2 slots
/// and the third derivatives in n(n+1)(n+2)/6 slots, indexed in colexicographic
/// order of the sorted index tuple so that the layout does not depend on n.
///
/// Arithmetic follows the Leibniz and Faa di Bruno rules exactly; the only
/// error is floating-point rounding.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <utility>

namespace grwcert {

inline constexpr int kMaxDim = 8;

constexpr int sym2_size(int n) { return n * (n + 1) / 2; }
constexpr int sym3_size(int n) { return n * (n + 1) * (n + 2) / 6; }

constexpr int sym2_index(int i, int j)
{
    if (i > j) std::swap(i, j);
    return j * (j + 1) / 2 + i;
}

constexpr int sym3_index(int i, int j, int k)
{
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
    return k * (k + 1) * (k + 2) / 6 + j * (j + 1) / 2 + i;
}

namespace detail {

struct PairSlot {
    int i, j;
};

struct TripleSlot {
    int i, j, k;
    int ij, ik, jk;
};

constexpr auto make_pair_table()
{
    std::array<PairSlot, sym2_size(kMaxDim)> table{};
    for (int j = 0; j < kMaxDim; ++j)
        for (int i = 0; i <= j; ++i) table[sym2_index(i, j)] = {i, j};
    return table;
}

constexpr auto make_triple_table()
{
    std::array<TripleSlot, sym3_size(kMaxDim)> table{};
    for (int k = 0; k < kMaxDim; ++k)
        for (int j = 0; j <= k; ++j)
            for (int i = 0; i <= j; ++i)
                table[sym3_index(i, j, k)] = {i, j, k, sym2_index(i, j), sym2_index(i, k), sym2_index(j, k)};
    return table;
}

inline constexpr auto kPairs = make_pair_table();
inline constexpr auto kTriples = make_triple_table();

}  // namespace detail

template <int Order>
class Jet {
    static_assert(Order >= 0 && Order <= 3, "jets are truncated at total order 3");

public:
    static constexpr int order = Order;

    Jet() = default;
    Jet(int dim, double value) : dim_(dim), v_(value) { assert(dim >= 0 && dim <= kMaxDim); }

    static Jet constant(int dim, double value) { return Jet(dim, value); }

    /// The coordinate function x^k evaluated at x^k = value.
    static Jet variable(int dim, int k, double value)
    {
        Jet r(dim, value);
        if constexpr (Order >= 1) r.g_[k] = 1.0;
        return r;
    }

    int dim() const { return dim_; }
    double value() const { return v_; }

    double d(int i) const
    {
        static_assert(Order >= 1);
        return g_[i];
    }
    double d(int i, int j) const
    {
        static_assert(Order >= 2);
        return h_[sym2_index(i, j)];
    }
    double d(int i, int j, int k) const
    {
        static_assert(Order >= 3);
        return t_[sym3_index(i, j, k)];
    }

    void set_value(double v) { v_ = v; }
    void set_d(int i, double v)
    {
        static_assert(Order >= 1);
        g_[i] = v;
    }
    void set_d(int i, int j, double v)
    {
        static_assert(Order >= 2);
        h_[sym2_index(i, j)] = v;
    }
    void set_d(int i, int j, int k, double v)
    {
        static_assert(Order >= 3);
        t_[sym3_index(i, j, k)] = v;
    }

    /// Raw symmetric storage (first sym2_size(dim()) / sym3_size(dim()) slots are live).
    const auto& hess_storage() const { return h_; }
    const auto& third_storage() const { return t_; }

    /// The jet of the partial derivative with respect to x^k, one order lower.
    Jet<Order - 1> partial(int k) const
        requires(Order >= 1)
    {
        Jet<Order - 1> r(dim_, g_[k]);
        if constexpr (Order >= 2)
            for (int i = 0; i < dim_; ++i) r.set_d(i, h_[sym2_index(i, k)]);
        if constexpr (Order >= 3)
            for (int s = 0; s < sym2_size(dim_); ++s) {
                const auto [i, j] = detail::kPairs[s];
                r.set_d(i, j, t_[sym3_index(i, j, k)]);
            }
        return r;
    }

    template <int M>
    Jet<M> truncate() const
        requires(M <= Order)
    {
        Jet<M> r(dim_, v_);
        if constexpr (M >= 1)
            for (int i = 0; i < dim_; ++i) r.set_d(i, g_[i]);
        if constexpr (M >= 2)
            for (int s = 0; s < sym2_size(dim_); ++s) {
                const auto [i, j] = detail::kPairs[s];
                r.set_d(i, j, h_[s]);
            }
        if constexpr (M >= 3)
            for (int s = 0; s < sym3_size(dim_); ++s) {
                const auto& t = detail::kTriples[s];
                r.set_d(t.i, t.j, t.k, t_[s]);
            }
        return r;
    }

    /// Largest absolute entry over value and all stored derivatives.
    double max_abs() const
    {
        double m = std::abs(v_);
        if constexpr (Order >= 1)
            for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(g_[i]));
        if constexpr (Order >= 2)
            for (int s = 0; s < sym2_size(dim_); ++s) m = std::max(m, std::abs(h_[s]));
        if constexpr (Order >= 3)
            for (int s = 0; s < sym3_size(dim_); ++s) m = std::max(m, std::abs(t_[s]));
        return m;
    }

    Jet operator-() const
    {
        Jet r = *this;
        r.scale_in_place(-1.0);
        return r;
    }

    Jet& operator+=(const Jet& o)
    {
        adopt_dim(o);
        v_ += o.v_;
        if constexpr (Order >= 1)
            for (int i = 0; i < dim_; ++i) g_[i] += o.g_[i];
        if constexpr (Order >= 2)
            for (int s = 0; s < sym2_size(dim_); ++s) h_[s] += o.h_[s];
        if constexpr (Order >= 3)
            for (int s = 0; s < sym3_size(dim_); ++s) t_[s] += o.t_[s];
        return *this;
    }

    Jet& operator-=(const Jet& o)
    {
        adopt_dim(o);
        v_ -= o.v_;
        if constexpr (Order >= 1)
            for (int i = 0; i < dim_; ++i) g_[i] -= o.g_[i];
        if constexpr (Order >= 2)
            for (int s = 0; s < sym2_size(dim_); ++s) h_[s] -= o.h_[s];
        if constexpr (Order >= 3)
            for (int s = 0; s < sym3_size(dim_); ++s) t_[s] -= o.t_[s];
        return *this;
    }

    Jet& operator+=(double c)
    {
        v_ += c;
        return *this;
    }
    Jet& operator-=(double c)
    {
        v_ -= c;
        return *this;
    }
    Jet& operator*=(double c)
    {
        scale_in_place(c);
        return *this;
    }
    Jet& operator/=(double c)
    {
        scale_in_place(1.0 / c);
        return *this;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double c) { return a += c; }
    friend Jet operator+(double c, Jet a) { return a += c; }
    friend Jet operator-(Jet a, double c) { return a -= c; }
    friend Jet operator-(double c, const Jet& a) { return (-a) += c; }
    friend Jet operator*(Jet a, double c) { return a *= c; }
    friend Jet operator*(double c, Jet a) { return a *= c; }
    friend Jet operator/(Jet a, double c) { return a /= c; }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        const int n = std::max(a.dim_, b.dim_);
        Jet r(n, a.v_ * b.v_);
        if constexpr (Order >= 1)
            for (int i = 0; i < n; ++i) r.g_[i] = a.g_[i] * b.v_ + a.v_ * b.g_[i];
        if constexpr (Order >= 2)
            for (int s = 0; s < sym2_size(n); ++s) {
                const auto [i, j] = detail::kPairs[s];
                r.h_[s] = a.h_[s] * b.v_ + a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i] + a.v_ * b.h_[s];
            }
        if constexpr (Order >= 3)
            for (int s = 0; s < sym3_size(n); ++s) {
                const auto& t = detail::kTriples[s];
                r.t_[s] = a.t_[s] * b.v_ + a.v_ * b.t_[s]                                           //
                          + a.h_[t.ij] * b.g_[t.k] + a.h_[t.ik] * b.g_[t.j] + a.h_[t.jk] * b.g_[t.i]  //
                          + a.g_[t.i] * b.h_[t.jk] + a.g_[t.j] * b.h_[t.ik] + a.g_[t.k] * b.h_[t.ij];
            }
        return r;
    }

    /// phi(f) given phi and its first three derivatives evaluated at f.value().
    friend Jet compose(const Jet& f, const std::array<double, 4>& phi)
    {
        const int n = f.dim_;
        Jet r(n, phi[0]);
        if constexpr (Order >= 1)
            for (int i = 0; i < n; ++i) r.g_[i] = phi[1] * f.g_[i];
        if constexpr (Order >= 2)
            for (int s = 0; s < sym2_size(n); ++s) {
                const auto [i, j] = detail::kPairs[s];
                r.h_[s] = phi[2] * f.g_[i] * f.g_[j] + phi[1] * f.h_[s];
            }
        if constexpr (Order >= 3)
            for (int s = 0; s < sym3_size(n); ++s) {
                const auto& t = detail::kTriples[s];
                r.t_[s] = phi[3] * f.g_[t.i] * f.g_[t.j] * f.g_[t.k]
                          + phi[2] * (f.h_[t.ij] * f.g_[t.k] + f.h_[t.ik] * f.g_[t.j] + f.h_[t.jk] * f.g_[t.i])
                          + phi[1] * f.t_[s];
            }
        return r;
    }

private:
    void scale_in_place(double c)
    {
        v_ *= c;
        if constexpr (Order >= 1)
            for (int i = 0; i < dim_; ++i) g_[i] *= c;
        if constexpr (Order >= 2)
            for (int s = 0; s < sym2_size(dim_); ++s) h_[s] *= c;
        if constexpr (Order >= 3)
            for (int s = 0; s < sym3_size(dim_); ++s) t_[s] *= c;
    }

    // A default-constructed jet has dim 0 and acts as the additive identity.
    void adopt_dim(const Jet& o) { dim_ = std::max(dim_, o.dim_); }

    int dim_ = 0;
    double v_ = 0.0;
    std::array<double, (Order >= 1 ? kMaxDim : 0)> g_{};
    std::array<double, (Order >= 2 ? sym2_size(kMaxDim) : 0)> h_{};
    std::array<double, (Order >= 3 ? sym3_size(kMaxDim) : 0)> t_{};
};

using Jet3 = Jet<3>;

// Elementary functions. Callers are responsible for domain checks; these
// follow IEEE semantics outside the domain.

template <int O>
Jet<O> reciprocal(const Jet<O>& f)
{
    const double x = f.value();
    const double r = 1.0 / x;
    return compose(f, {r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r});
}

template <int O>
Jet<O> operator/(const Jet<O>& a, const Jet<O>& b)
{
    return a * reciprocal(b);
}

template <int O>
Jet<O> operator/(double c, const Jet<O>& b)
{
    return c * reciprocal(b);
}

template <int O>
Jet<O> exp(const Jet<O>& f)
{
    const double e = std::exp(f.value());
    return compose(f, {e, e, e, e});
}

template <int O>
Jet<O> log(const Jet<O>& f)
{
    const double r = 1.0 / f.value();
    return compose(f, {std::log(f.value()), r, -r * r, 2.0 * r * r * r});
}

template <int O>
Jet<O> sqrt(const Jet<O>& f)
{
    const double x = f.value();
    const double s = std::sqrt(x);
    return compose(f, {s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)});
}

template <int O>
Jet<O> sin(const Jet<O>& f)
{
    const double s = std::sin(f.value()), c = std::cos(f.value());
    return compose(f, {s, c, -s, -c});
}

template <int O>
Jet<O> cos(const Jet<O>& f)
{
    const double s = std::sin(f.value()), c = std::cos(f.value());
    return compose(f, {c, -s, -c, s});
}

template <int O>
Jet<O> tan(const Jet<O>& f)
{
    const double t = std::tan(f.value());
    const double sec2 = 1.0 + t * t;
    return compose(f, {t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (sec2 + 2.0 * t * t)});
}

template <int O>
Jet<O> sinh(const Jet<O>& f)
{
    const double s = std::sinh(f.value()), c = std::cosh(f.value());
    return compose(f, {s, c, s, c});
}

template <int O>
Jet<O> cosh(const Jet<O>& f)
{
    const double s = std::sinh(f.value()), c = std::cosh(f.value());
    return compose(f, {c, s, c, s});
}

template <int O>
Jet<O> tanh(const Jet<O>& f)
{
    const double t = std::tanh(f.value());
    const double s2 = 1.0 - t * t;
    return compose(f, {t, s2, -2.0 * t * s2, -2.0 * s2 * (s2 - 2.0 * t * t)});
}

/// f^a for a constant exponent. Terms whose falling-factorial coefficient
/// vanishes are dropped so that integer powers stay finite at f = 0.
template <int O>
Jet<O> pow(const Jet<O>& f, double a)
{
    const double x = f.value();
    std::array<double, 4> phi{};
    double coeff = 1.0;
    for (int k = 0; k < 4; ++k) {
        phi[k] = coeff == 0.0 ? 0.0 : coeff * std::pow(x, a - k);
        coeff *= (a - k);
    }
    return compose(f, phi);
}

}  // namespace grwcert
