#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grwcert/chart.hpp"
#include "grwcert/classify.hpp"
#include "grwcert/curvature.hpp"
#include "grwcert/jet.hpp"

namespace grwcert {

/// Perfect-fluid variables in geometric units.
struct FluidState {
    double p = 0.0;
    double mu = 0.0;
    double kappa = 1.0;
};

/// mu = ((n-2)A + B)/(2 kappa), p = B/kappa - mu.
FluidState fluid_from_AB(double A, double B, double kappa = 1.0, int n = 4);

/// A = kappa (p - mu)/(2 - n), B = kappa (p + mu); returns (A, B).
std::pair<double, double> AB_from_fluid(double p, double mu, double kappa = 1.0, int n = 4);

/// p and mu as jets, so their gradients are exact.
struct FluidJets {
    Jet<1> p, mu;
};

FluidJets fluid_jets(const FluidFields& ff, double kappa = 1.0);

struct MotionResiduals {
    Residual energy;    // u^k nabla_k mu + (p + mu) nabla_k u^k
    Residual momentum;  // (nabla_j + u_j u^k nabla_k) p + (p + mu) u^k nabla_k u_j

    MotionResiduals& merge(const MotionResiduals& o)
    {
        energy.merge(o.energy);
        momentum.merge(o.momentum);
        return *this;
    }
};

MotionResiduals motion_at(const FluidFields& ff, const Jet<1>& p, const Jet<1>& mu);

/// `p_shift`, if given, is added to the pressure field.
MotionResiduals motion_residuals(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points,
                                 double kappa = 1.0, const std::optional<std::string>& p_shift = std::nullopt);

struct EosSample {
    double p = 0.0, mu = 0.0;
    std::vector<double> grad_p, grad_mu;
};

EosSample eos_sample(const FluidJets& fj);

struct EosReport {
    double parallelism = 0.0;     // max |grad p ^ grad mu| / (1 + |grad p| |grad mu|)
    std::optional<double> w;      // least-squares slope of p = w mu; empty for a degenerate fit
    bool degenerate_fit = false;  // mu is constant across the samples
    double fit_residual = 0.0;    // max |p - w mu|
    double min_p_plus_mu = 0.0;
    double min_abs_p_plus_mu = 0.0;
};

EosReport eos_check(std::span<const EosSample> samples, double tol = 1e-7);

struct HomotheticSample {
    double A = 0.0, B = 0.0;
    double grad_rho_norm = 0.0;
    double p = 0.0, mu = 0.0;
    int n = 4;
};

struct HomotheticReport {
    bool equivalent = true;    // the three conditions agree at every point
    int homothetic_points = 0; // all three hold
    int proper_points = 0;     // none holds
    int mixed_points = 0;      // they disagree
    double max_eos_gap = 0.0;  // max |p - (3-n)/(n-1) mu| over homothetic points
};

/// |A - B| small  <=>  |grad rho| small  <=>  |p - (3-n)/(n-1) mu| small, pointwise.
HomotheticReport homothetic_check(std::span<const HomotheticSample> samples, double tol = 1e-7);

}  // namespace grwcert
