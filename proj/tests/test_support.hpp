#pragma once

#include <string>
#include <utility>
#include <vector>

#include "grwcert/chart.hpp"

namespace testing_support {

/// Diagonal chart spec with the given component expressions.
inline grwcert::ChartSpec diagonal_spec(std::string name, std::vector<std::string> coords,
                                        const std::vector<std::string>& diag,
                                        std::vector<std::pair<double, double>> ranges,
                                        grwcert::Signature sig = grwcert::Signature::Lorentzian)
{
    grwcert::ChartSpec s;
    s.name = std::move(name);
    s.dimension = static_cast<int>(coords.size());
    s.signature = sig;
    s.coordinates = std::move(coords);
    for (int i = 0; i < s.dimension; ++i) s.metric[{i, i}] = diag[i];
    s.ranges = std::move(ranges);
    return s;
}

inline grwcert::ChartSpec minkowski4()
{
    return diagonal_spec("minkowski", {"t", "x", "y", "z"}, {"-1", "1", "1", "1"},
                         {{1, 2}, {0, 1}, {0, 1}, {0, 1}});
}

/// -dt^2 + q^2 (dx^2 + dy^2 + dz^2)
inline grwcert::ChartSpec flat_grw4(const std::string& q, std::pair<double, double> trange)
{
    const std::string a = "(" + q + ")^2";
    return diagonal_spec("grw", {"t", "x", "y", "z"}, {"-1", a, a, a}, {trange, {0, 1}, {0, 1}, {0, 1}});
}

/// -dt^2 + q^2 (dchi^2 + sin^2 chi (dtheta^2 + sin^2 theta dphi^2)), unit S^3 fiber.
inline grwcert::ChartSpec sphere3_grw4(const std::string& q, std::pair<double, double> trange)
{
    const std::string a = "(" + q + ")^2";
    auto s = diagonal_spec("grw-S3", {"t", "chi", "theta", "phi"},
                           {"-1", a, a + "*sin(chi)^2", a + "*sin(chi)^2*sin(theta)^2"},
                           {trange, {0.3, 2.8}, {0.3, 2.8}, {0, 6}});
    s.exclusions.push_back({"sin(chi)", 0.1});
    s.exclusions.push_back({"sin(theta)", 0.1});
    return s;
}

inline grwcert::ChartSpec sphere2()
{
    return diagonal_spec("S2", {"theta", "phi"}, {"1", "sin(theta)^2"}, {{0.3, 2.8}, {0, 6}},
                         grwcert::Signature::Riemannian);
}

}  // namespace testing_support
