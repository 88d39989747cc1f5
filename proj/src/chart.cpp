#include "grwcert/chart.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "grwcert/geometry.hpp"

namespace grwcert {

const char* to_string(Signature s) { return s == Signature::Lorentzian ? "lorentzian" : "riemannian"; }

namespace {

std::vector<std::string> keys_of(const std::map<std::string, double>& m)
{
    std::vector<std::string> k;
    for (const auto& [name, _] : m) k.push_back(name);
    return k;
}

double unit_uniform(std::mt19937_64& rng)
{
    // 53 random bits; std::uniform_real_distribution is not reproducible across standard libraries.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Expr MetricChart::parse_expr(std::string_view text) const { return parse(text, spec_.coordinates, param_names_); }

Tensor<double, 2> MetricChart::metric_values(std::span<const double> p) const { return values(metric_jets<0>(p)); }

bool MetricChart::in_domain(std::span<const double> p) const
{
    if (static_cast<int>(p.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (p[i] < spec_.ranges[i].first || p[i] > spec_.ranges[i].second) return false;
    for (std::size_t e = 0; e < exclusions_.size(); ++e) {
        try {
            if (!(eval_value(exclusions_[e], p, param_values_) > spec_.exclusions[e].min)) return false;
        } catch (const DomainError&) {
            return false;
        }
    }
    return true;
}

ChartPoint MetricChart::probe_point() const
{
    if (spec_.basepoint) return *spec_.basepoint;
    ChartPoint p(dim());
    for (int i = 0; i < dim(); ++i) p[i] = 0.5 * (spec_.ranges[i].first + spec_.ranges[i].second);
    return p;
}

void MetricChart::validate_signature(std::span<const double> p) const
{
    const int n = dim();
    const auto g = metric_values(p);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    int negative = 0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(ev(i)) <= 1e-12 * scale) throw ChartError("metric is not invertible at the probe point");
        if (ev(i) < 0) ++negative;
    }
    const int expected = spec_.signature == Signature::Lorentzian ? 1 : 0;
    if (negative != expected)
        throw ChartError("signature mismatch: expected " + std::string(to_string(spec_.signature)) + ", found " +
                         std::to_string(negative) + " negative eigenvalue(s)");
}

MetricChart compile_chart(const ChartSpec& spec)
{
    const int n = spec.dimension;
    if (n < 2 || n > kMaxDim) throw ChartError("dimension must be between 2 and " + std::to_string(kMaxDim));
    if (static_cast<int>(spec.coordinates.size()) != n) throw ChartError("coordinate count does not match dimension");
    if (static_cast<int>(spec.ranges.size()) != n) throw ChartError("domain ranges do not match dimension");
    for (const auto& [lo, hi] : spec.ranges)
        if (!(lo <= hi)) throw ChartError("empty domain range");
    if (spec.basepoint && static_cast<int>(spec.basepoint->size()) != n)
        throw ChartError("basepoint does not match dimension");

    MetricChart chart;
    chart.spec_ = spec;
    chart.param_names_ = keys_of(spec.parameters);
    for (const auto& [_, v] : spec.parameters) chart.param_values_.push_back(v);

    chart.components_.assign(static_cast<std::size_t>(n) * n, Expr{});
    for (const auto& [ij, text] : spec.metric) {
        const auto [i, j] = ij;
        if (i < 0 || j < 0 || i >= n || j >= n) throw ChartError("metric index out of range");
        if (i > j) throw ChartError("only upper-triangle metric entries are accepted");
        chart.components_[i * n + j] = chart.parse_expr(text);
    }
    for (const auto& ex : spec.exclusions) chart.exclusions_.push_back(chart.parse_expr(ex.expr));
    if (spec.velocity_field) {
        if (static_cast<int>(spec.velocity_field->size()) != n)
            throw ChartError("velocity field must have one component per coordinate");
        for (const auto& c : *spec.velocity_field) chart.parse_expr(c);
    }

    chart.validate_signature(chart.probe_point());
    return chart;
}

std::vector<ChartPoint> sample_points(const MetricChart& chart, int count, std::uint64_t seed)
{
    if (count < 1) throw Error("sample count must be at least 1");
    const int n = chart.dim();
    const auto& ranges = chart.spec().ranges;
    std::mt19937_64 rng(seed);
    std::vector<ChartPoint> points;
    points.reserve(count);
    long long rejected = 0;
    const long long budget = 1000LL * count;
    while (static_cast<int>(points.size()) < count) {
        ChartPoint p(n);
        for (int i = 0; i < n; ++i) p[i] = ranges[i].first + (ranges[i].second - ranges[i].first) * unit_uniform(rng);
        if (chart.in_domain(p)) {
            points.push_back(std::move(p));
        } else if (++rejected >= budget) {
            throw SamplingExhausted("rejection sampling exhausted after " + std::to_string(rejected) + " attempts");
        }
    }
    return points;
}

VectorField VectorField::closed_form(const MetricChart& chart, const std::vector<std::string>& components, Index index,
                                     bool normalize)
{
    if (static_cast<int>(components.size()) != chart.dim())
        throw Error("vector field must have one component per coordinate");
    VectorField v;
    for (const auto& c : components) v.components_.push_back(chart.parse_expr(c));
    v.index_ = index;
    v.normalize_ = normalize;
    return v;
}

VectorField VectorField::pointwise(Rule rule, Index index)
{
    VectorField v;
    v.rule_ = std::move(rule);
    v.index_ = index;
    return v;
}

template <int O>
std::vector<Jet<O>> VectorField::covariant_jets(const MetricChart& chart, std::span<const double> p) const
{
    if (rule_) throw NotDifferentiable("pointwise vector field has no derivatives");
    const int n = chart.dim();
    std::vector<Jet<O>> comp;
    comp.reserve(n);
    for (const auto& e : components_) comp.push_back(eval_jet<O>(e, p, chart.parameter_values()));

    const bool need_metric = index_ == Index::Contravariant || normalize_;
    if (!need_metric) return comp;

    const auto g = chart.metric_jets<O>(p);
    std::vector<Jet<O>> lower = comp;
    if (index_ == Index::Contravariant) lower = contract(g, comp);
    if (normalize_) {
        const auto ginv = invert(g);
        const auto upper = contract(ginv, lower);
        Jet<O> norm2(n, 0.0);
        for (int i = 0; i < n; ++i) norm2 += lower[i] * upper[i];
        if (!(norm2.value() < 0.0)) throw DomainError("field is not timelike, cannot normalize", "velocity_field");
        const Jet<O> inv_len = reciprocal(sqrt(-norm2));
        for (auto& c : lower) c = c * inv_len;
    }
    return lower;
}

template std::vector<Jet<0>> VectorField::covariant_jets<0>(const MetricChart&, std::span<const double>) const;
template std::vector<Jet<1>> VectorField::covariant_jets<1>(const MetricChart&, std::span<const double>) const;
template std::vector<Jet<2>> VectorField::covariant_jets<2>(const MetricChart&, std::span<const double>) const;
template std::vector<Jet<3>> VectorField::covariant_jets<3>(const MetricChart&, std::span<const double>) const;

std::vector<double> VectorField::covariant_values(const MetricChart& chart, std::span<const double> p) const
{
    if (!rule_) return values(covariant_jets<0>(chart, p));
    auto v = rule_(p);
    if (index_ == Index::Contravariant) {
        const auto g = chart.metric_values(p);
        std::vector<double> low(v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) low[i] += g(i, j) * v[j];
        return low;
    }
    return v;
}

}  // namespace grwcert
