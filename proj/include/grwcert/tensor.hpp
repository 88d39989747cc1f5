#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

namespace grwcert {

/// Dense rank-`Rank` array over an n-dimensional index range, flat lexicographic storage.
/// Index positions (upper/lower) are a naming convention of the owner, not tracked here.
template <class T, int Rank>
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(int n, const T& fill = T{}) : n_(n), data_(size_for(n), fill) {}

    int dim() const { return n_; }
    std::size_t size() const { return data_.size(); }

    template <class... I>
        requires(sizeof...(I) == Rank)
    T& operator()(I... idx)
    {
        return data_[flat(idx...)];
    }

    template <class... I>
        requires(sizeof...(I) == Rank)
    const T& operator()(I... idx) const
    {
        return data_[flat(idx...)];
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

private:
    static std::size_t size_for(int n)
    {
        std::size_t s = 1;
        for (int r = 0; r < Rank; ++r) s *= static_cast<std::size_t>(n);
        return s;
    }

    template <class... I>
    std::size_t flat(I... idx) const
    {
        std::size_t f = 0;
        ((assert(static_cast<int>(idx) >= 0 && static_cast<int>(idx) < n_), f = f * n_ + static_cast<std::size_t>(idx)),
         ...);
        return f;
    }

    int n_ = 0;
    std::vector<T> data_;
};

template <class T, int R>
double max_abs(const Tensor<T, R>& t)
{
    double m = 0.0;
    for (const auto& x : t.data()) {
        if constexpr (std::is_arithmetic_v<T>)
            m = std::max(m, std::abs(x));
        else
            m = std::max(m, std::abs(x.value()));
    }
    return m;
}

inline double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace grwcert
