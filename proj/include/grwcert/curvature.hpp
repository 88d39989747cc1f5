#pragma once

#include <span>
#include <vector>

#include "grwcert/chart.hpp"
#include "grwcert/jet.hpp"
#include "grwcert/tensor.hpp"

namespace grwcert {

/// Every curvature object at one chart point.
///
/// Conventions: the Riemann tensor is fixed by the Ricci identity
/// (nabla_j nabla_k - nabla_k nabla_j) X_l = R_{jkl}^m X_m, Ricci contracts the
/// second slot with the upper one, R_{kl} = R_{kml}^m, which makes round spheres
/// positively curved and de Sitter Ricci = +3g. Four-index tensors are stored
/// lexicographically in the order their indices are written.
struct CurvaturePoint {
    int n = 0;
    ChartPoint point;

    Tensor<Jet<3>, 2> metric;       // g_ij
    Tensor<Jet<2>, 2> inverse;      // g^ij
    Tensor<Jet<2>, 3> christoffel;  // Gamma^m_{jk} at (m, j, k), with first and second derivatives
    Tensor<Jet<1>, 4> riemann;      // R_{jkl}^m
    Tensor<Jet<1>, 4> riemann_low;  // R_{jklm}
    Tensor<Jet<1>, 2> ricci;        // R_{jl}
    Jet<1> scalar;                  // R
    Tensor<Jet<1>, 4> weyl;         // C_{jklm}

    Tensor<double, 3> ricci_derivative;    // nabla_k R_{jl} at (k, j, l)
    std::vector<double> scalar_gradient;   // nabla_j R
    Tensor<double, 3> div_weyl;            // nabla_m C_{jkl}^m at (j, k, l)
    Tensor<double, 5> riemann_derivative;  // nabla_a R_{bcde}

    double g(int i, int j) const { return metric(i, j).value(); }
    double ginv(int i, int j) const { return inverse(i, j).value(); }
    /// d_k g_ij
    double dg(int k, int i, int j) const { return metric(i, j).d(k); }
    double gamma(int m, int j, int k) const { return christoffel(m, j, k).value(); }
    double ric(int j, int l) const { return ricci(j, l).value(); }
    double R() const { return scalar.value(); }
};

CurvaturePoint curvature_at(const MetricChart& chart, std::span<const double> p);

/// Scale-free residual: max|diff| / (1 + scale).
struct Residual {
    double raw = 0.0;     // max-abs
    double scaled = 0.0;  // raw / (1 + dominant input max-abs)

    static Residual of(double raw, double scale) { return {raw, raw / (1.0 + scale)}; }
    Residual& merge(const Residual& o)
    {
        raw = std::max(raw, o.raw);
        scaled = std::max(scaled, o.scaled);
        return *this;
    }
};

Residual first_bianchi_residual(const CurvaturePoint& cp);
Residual second_bianchi_residual(const CurvaturePoint& cp);
Residual weyl_trace_residual(const CurvaturePoint& cp);
Residual ricci_symmetry_residual(const CurvaturePoint& cp);

/// The divergence-free-Weyl residual, max |nabla_m C_{jkl}^m| scaled by the Riemann magnitude.
Residual div_weyl_residual(const CurvaturePoint& cp);

/// The Cotton combination
///   K_{jkl} = nabla_k R_{jl} - nabla_l R_{jk} - (g_{jl} nabla_k R - g_{jk} nabla_l R) / (2(n-1)).
double cotton(const CurvaturePoint& cp, int j, int k, int l);

/// Weyl divergence coefficient: nabla_m C_{jkl}^m = cotton_coefficient(n) * K_{lkj}.
double cotton_coefficient(int n);

/// Residual of nabla_m C_{jkl}^m - cotton_coefficient(n) * K_{lkj}.
Residual div_weyl_cotton_residual(const CurvaturePoint& cp);

/// nabla_k v_j for a closed-form covector field, with first derivatives.
struct VectorGradient {
    Tensor<Jet<1>, 2> nabla;  // (k, j)
    /// max |(nabla_k v_j - nabla_j v_k) - (d_k v_j - d_j v_k)|; zero up to rounding by symmetry of Gamma.
    double curl_mismatch = 0.0;
};

VectorGradient grad_vector_at(const MetricChart& chart, const VectorField& v, std::span<const double> p);

}  // namespace grwcert
