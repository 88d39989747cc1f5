#include "grwcert/physics.hpp"

#include <algorithm>
#include <cmath>

namespace grwcert {

FluidState fluid_from_AB(double A, double B, double kappa, int n)
{
    const double mu = ((n - 2) * A + B) / (2.0 * kappa);
    return {B / kappa - mu, mu, kappa};
}

std::pair<double, double> AB_from_fluid(double p, double mu, double kappa, int n)
{
    return {kappa * (p - mu) / (2.0 - n), kappa * (p + mu)};
}

FluidJets fluid_jets(const FluidFields& ff, double kappa)
{
    const Jet<1> mu = ff.gamma / (2.0 * kappa);
    return {ff.B / kappa - mu, mu};
}

MotionResiduals motion_at(const FluidFields& ff, const Jet<1>& p, const Jet<1>& mu)
{
    const int n = ff.n;
    const double sum = p.value() + mu.value();
    double div = 0.0, flow_mu = 0.0, flow_p = 0.0, du_max = 0.0;
    for (int k = 0; k < n; ++k) {
        flow_mu += ff.uu(k) * mu.d(k);
        flow_p += ff.uu(k) * p.d(k);
        for (int j = 0; j < n; ++j) {
            div += ff.ginv(k, j) * ff.du(k, j);
            du_max = std::max(du_max, std::abs(ff.du(k, j)));
        }
    }
    double grad_max = 0.0, momentum = 0.0;
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += ff.uu(k) * ff.du(k, j);
        momentum = std::max(momentum, std::abs(p.d(j) + ff.uv(j) * flow_p + sum * acc));
        grad_max = std::max({grad_max, std::abs(p.d(j)), std::abs(mu.d(j))});
    }
    const double scale = std::max(grad_max, std::abs(sum) * du_max);
    return {Residual::of(std::abs(flow_mu + sum * div), scale), Residual::of(momentum, scale)};
}

MotionResiduals motion_residuals(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points,
                                 double kappa, const std::optional<std::string>& p_shift)
{
    std::optional<Expr> shift;
    if (p_shift) shift = chart.parse_expr(*p_shift);
    MotionResiduals r;
    for (const auto& pt : points) {
        const auto ff = fluid_fields_at(chart, curvature_at(chart, pt), u);
        auto fj = fluid_jets(ff, kappa);
        if (shift) fj.p += eval_jet<1>(*shift, pt, chart.parameter_values());
        r.merge(motion_at(ff, fj.p, fj.mu));
    }
    return r;
}

EosSample eos_sample(const FluidJets& fj)
{
    EosSample s;
    s.p = fj.p.value();
    s.mu = fj.mu.value();
    for (int k = 0; k < fj.p.dim(); ++k) {
        s.grad_p.push_back(fj.p.d(k));
        s.grad_mu.push_back(fj.mu.d(k));
    }
    return s;
}

EosReport eos_check(std::span<const EosSample> samples, double tol)
{
    EosReport r;
    if (samples.empty()) return r;
    double pm = 0.0, mm = 0.0, grad_mu_max = 0.0, mu_lo = samples[0].mu, mu_hi = samples[0].mu;
    r.min_p_plus_mu = r.min_abs_p_plus_mu = INFINITY;
    for (const auto& s : samples) {
        const std::size_t n = s.grad_p.size();
        double wedge2 = 0.0, np = 0.0, nm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            np += s.grad_p[i] * s.grad_p[i];
            nm += s.grad_mu[i] * s.grad_mu[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                const double w = s.grad_p[i] * s.grad_mu[j] - s.grad_p[j] * s.grad_mu[i];
                wedge2 += w * w;
            }
        }
        r.parallelism = std::max(r.parallelism, std::sqrt(wedge2) / (1.0 + std::sqrt(np * nm)));
        grad_mu_max = std::max(grad_mu_max, std::sqrt(nm));
        mu_lo = std::min(mu_lo, s.mu);
        mu_hi = std::max(mu_hi, s.mu);
        pm += s.p * s.mu;
        mm += s.mu * s.mu;
        r.min_p_plus_mu = std::min(r.min_p_plus_mu, s.p + s.mu);
        r.min_abs_p_plus_mu = std::min(r.min_abs_p_plus_mu, std::abs(s.p + s.mu));
    }
    const double mu_scale = 1.0 + std::max(std::abs(mu_lo), std::abs(mu_hi));
    r.degenerate_fit = grad_mu_max <= tol * mu_scale && mu_hi - mu_lo <= tol * mu_scale;
    if (!r.degenerate_fit && mm > 0.0) {
        const double w = pm / mm;
        r.w = w;
        for (const auto& s : samples) r.fit_residual = std::max(r.fit_residual, std::abs(s.p - w * s.mu));
    }
    return r;
}

HomotheticReport homothetic_check(std::span<const HomotheticSample> samples, double tol)
{
    HomotheticReport r;
    for (const auto& s : samples) {
        const double ratio = (3.0 - s.n) / (s.n - 1.0);
        const double eos_gap = std::abs(s.p - ratio * s.mu);
        const bool c1 = std::abs(s.A - s.B) <= tol * (1.0 + std::abs(s.A) + std::abs(s.B));
        const bool c2 = s.grad_rho_norm <= tol;
        const bool c3 = eos_gap <= tol * (1.0 + std::abs(s.p) + std::abs(s.mu));
        if (c1 && c2 && c3) {
            ++r.homothetic_points;
            r.max_eos_gap = std::max(r.max_eos_gap, eos_gap);
        } else if (!c1 && !c2 && !c3) {
            ++r.proper_points;
        } else {
            ++r.mixed_points;
            r.equivalent = false;
        }
    }
    return r;
}

}  // namespace grwcert
