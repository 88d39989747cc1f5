#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grwcert/expr.hpp"
#include "grwcert/jet.hpp"
#include "grwcert/tensor.hpp"

namespace grwcert {

enum class Signature { Lorentzian, Riemannian };

const char* to_string(Signature s);

using ChartPoint = std::vector<double>;

/// A region to avoid: points with `expr <= min` are rejected.
struct Exclusion {
    std::string expr;
    double min = 0.0;
};

/// Optional adapted-chart data for warped products -dt^2 + q(t)^2 g*.
/// The fiber uses coordinates[1..n-1] of the enclosing chart.
struct WarpedProductSpec {
    std::string warp;
    std::map<std::pair<int, int>, std::string> fiber_metric;  // upper triangle, fiber-local indices
};

/// Uncompiled description of a metric chart; the in-memory form of a spec file.
struct ChartSpec {
    std::string name;
    int dimension = 0;
    Signature signature = Signature::Lorentzian;
    std::vector<std::string> coordinates;
    std::map<std::string, double> parameters;
    std::map<std::pair<int, int>, std::string> metric;  // i <= j, missing entries are zero
    std::optional<std::vector<std::string>> velocity_field;  // covariant components
    std::vector<std::pair<double, double>> ranges;            // per coordinate
    std::vector<Exclusion> exclusions;
    std::optional<ChartPoint> basepoint;
    std::optional<WarpedProductSpec> warped_product;
};

/// Compiled, immutable chart. Cheap to copy; safe to share across threads.
class MetricChart {
public:
    int dim() const { return spec_.dimension; }
    const ChartSpec& spec() const { return spec_; }
    const std::string& name() const { return spec_.name; }
    Signature signature() const { return spec_.signature; }
    const std::vector<std::string>& coordinates() const { return spec_.coordinates; }
    const std::vector<std::string>& parameter_names() const { return param_names_; }
    ParamValues parameter_values() const { return param_values_; }

    /// Parse an expression over this chart's coordinates and parameters.
    Expr parse_expr(std::string_view text) const;

    template <int O>
    Tensor<Jet<O>, 2> metric_jets(std::span<const double> p) const
    {
        const int n = dim();
        Tensor<Jet<O>, 2> g(n, Jet<O>(n, 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const auto& e = components_[i * n + j];
                if (e.empty()) continue;
                g(i, j) = eval_jet<O>(e, p, param_values_);
                g(j, i) = g(i, j);
            }
        return g;
    }

    Tensor<double, 2> metric_values(std::span<const double> p) const;

    /// Inside the box and clear of every exclusion (evaluation failures count as outside).
    bool in_domain(std::span<const double> p) const;

    /// Basepoint if declared, else the box center.
    ChartPoint probe_point() const;

    /// Throws ChartError unless g at `p` is invertible with the declared signature.
    void validate_signature(std::span<const double> p) const;

private:
    friend MetricChart compile_chart(const ChartSpec& spec);

    ChartSpec spec_;
    std::vector<std::string> param_names_;
    std::vector<double> param_values_;
    std::vector<Expr> components_;  // n*n, upper triangle populated
    std::vector<Expr> exclusions_;
};

/// Parse every expression and validate the signature at the probe point.
MetricChart compile_chart(const ChartSpec& spec);

/// Seeded uniform points in the domain box, rejecting exclusion zones.
/// Throws SamplingExhausted after 1000*count rejections.
std::vector<ChartPoint> sample_points(const MetricChart& chart, int count, std::uint64_t seed);

/// A covector or vector field, either in closed form (jet-differentiable) or as a pointwise rule.
class VectorField {
public:
    enum class Index { Covariant, Contravariant };
    using Rule = std::function<std::vector<double>(std::span<const double>)>;

    /// `normalize` rescales to unit timelike length g(u,u) = -1 inside jet arithmetic.
    static VectorField closed_form(const MetricChart& chart, const std::vector<std::string>& components,
                                   Index index = Index::Covariant, bool normalize = false);
    static VectorField pointwise(Rule rule, Index index = Index::Covariant);

    bool differentiable() const { return !rule_; }
    Index index() const { return index_; }

    /// Covariant components as jets; lowers contravariant fields through g. Throws NotDifferentiable
    /// for pointwise rules.
    template <int O>
    std::vector<Jet<O>> covariant_jets(const MetricChart& chart, std::span<const double> p) const;

    std::vector<double> covariant_values(const MetricChart& chart, std::span<const double> p) const;

private:
    std::vector<Expr> components_;
    Rule rule_;
    Index index_ = Index::Covariant;
    bool normalize_ = false;
};

}  // namespace grwcert
