#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grwcert/chart.hpp"
#include "grwcert/curvature.hpp"
#include "grwcert/jet.hpp"
#include "grwcert/tensor.hpp"

namespace grwcert {

// ---------------------------------------------------------------------------
// Perfect-fluid decomposition R_ij = A g_ij + B u_i u_j

enum class FluidStatus {
    Ok,
    EinsteinDegenerate,  // all eigenvalues coincide: B = 0, u undetermined
    SpacelikeAnomaly,    // the distinguished eigendirection is not timelike
    Unclustered,         // no (n-1)-fold eigenvalue
    OrientationTie,      // u^0 = 0, orientation undefined
};

const char* to_string(FluidStatus s);

struct FluidDecomposition {
    FluidStatus status = FluidStatus::Unclustered;
    double A = 0.0;
    double B = 0.0;
    std::vector<double> u;     // covariant, g(u, u) = -1, empty unless status is Ok
    std::vector<double> u_up;  // contravariant, u_up[0] > 0
    double residual = 0.0;     // max |R - A g - B u u| / (1 + max |R|)
    std::vector<double> eigenvalues;  // real parts, ascending

    bool ok() const { return status == FluidStatus::Ok; }
    bool degenerate() const { return status == FluidStatus::EinsteinDegenerate; }
};

inline constexpr double kDefaultClusterTol = 1e-6;

/// Eigen-decompose the mixed tensor R^i_j.
FluidDecomposition fluid_decompose(const Tensor<double, 2>& g, const Tensor<double, 2>& ricci,
                                   double cluster_tol = kDefaultClusterTol);
FluidDecomposition fluid_decompose(const CurvaturePoint& cp, double cluster_tol = kDefaultClusterTol);

// ---------------------------------------------------------------------------
// Jet pipeline for a closed-form velocity field

/// Everything derived from a closed-form u at one point. Scalars carry exact
/// first derivatives; for scalars the covariant gradient is the partial one.
struct FluidFields {
    int n = 0;
    ChartPoint point;
    Tensor<double, 2> g, ginv;
    std::vector<Jet<1>> u;      // u_j
    std::vector<Jet<1>> u_up;   // u^j
    Tensor<Jet<1>, 2> nabla_u;  // nabla_k u_j at (k, j)
    Jet<1> R_uu, A, B, gamma;
    Jet<1> f;  // nabla^k u_k / (n - 1)

    double uv(int j) const { return u[j].value(); }
    double uu(int j) const { return u_up[j].value(); }
    double du(int k, int j) const { return nabla_u(k, j).value(); }
};

FluidFields fluid_fields_at(const MetricChart& chart, const CurvaturePoint& cp, const VectorField& u);

struct ScalarFields {
    double A = 0, B = 0, gamma = 0;
    std::vector<double> grad_A, grad_B, grad_gamma;
};

/// A = (R + R_uu)/(n-1), B = R_uu + A, gamma = (n-2)A + B with exact gradients.
ScalarFields scalar_fields_at(const MetricChart& chart, const VectorField& u, std::span<const double> p);

/// max |nabla_k u_j - nabla_j u_k|; raw is the plain max, scaled divides by 1 + max |nabla u|.
Residual closed_residual(const FluidFields& ff);
Residual check_closed(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points);

/// max |u^k nabla_k u_j|
Residual geodesic_residual(const FluidFields& ff);
Residual check_geodesic(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points);

// ---------------------------------------------------------------------------
// Torse-forming and concircular structure

struct TorseFormingData {
    double f = 0.0;
    std::vector<double> omega;  // f u
    Residual residual;          // nabla_k u_j - f (u_k u_j + g_kj)
    /// |f + u^m nabla_m gamma / (2B(n-1))|, present when B is not negligible.
    std::optional<double> f_gamma_gap;
    /// max |nabla_k gamma / (2B(n-1)) - f u_k|, present when B is not negligible.
    std::optional<double> omega_gamma_gap;
};

TorseFormingData torse_decompose(const Tensor<double, 2>& nabla_u, std::span<const double> u,
                                 const Tensor<double, 2>& g, const Tensor<double, 2>& ginv);
TorseFormingData torse_decompose(const FluidFields& ff);

/// Closedness of omega = f u: max |d_j omega_k - d_k omega_j|.
Residual omega_curl_residual(const FluidFields& ff);

/// Closedness of a closed-form covector field.
Residual concircular_check(const MetricChart& chart, const VectorField& omega, std::span<const ChartPoint> points);

// ---------------------------------------------------------------------------
// Potentials by line integration

struct QuadratureOptions {
    int order = 8;
    int panels = 8;
    double convergence_tol = 1e-10;
};

struct PotentialResult {
    double value = 0.0;
    double path_defect = 0.0;       // |ascending - descending staircase|
    double convergence_gap = 0.0;   // |P panels - 2P panels|
};

using CovectorFunction = std::function<std::vector<double>(std::span<const double>)>;

/// Integral of w along the axis-aligned staircase from `base` to `p`, moving
/// coordinates in ascending order. Throws QuadratureError when doubling the
/// panel count changes the value by more than convergence_tol (relative).
PotentialResult line_integral(const CovectorFunction& w, std::span<const double> base, std::span<const double> p,
                              const QuadratureOptions& opts = {});

/// Line integral of a closed-form covector; throws NotClosed when its curl at the
/// endpoints exceeds `closed_tol`.
PotentialResult reconstruct_potential(const MetricChart& chart, const VectorField& w, std::span<const double> base,
                                      std::span<const double> p, double closed_tol = 1e-7,
                                      const QuadratureOptions& opts = {});

/// f u evaluated from first derivatives only; the integrand for sigma.
CovectorFunction omega_function(const MetricChart& chart, const VectorField& u);

/// Covariant values of u; the integrand for theta.
CovectorFunction velocity_function(const MetricChart& chart, const VectorField& u);

// ---------------------------------------------------------------------------
// Chen vector and conformal Killing structure

struct ConcircularData {
    double sigma = 0.0;
    double path_defect = 0.0;
    std::vector<double> X;       // e^{-sigma} u
    double rho = 0.0;            // e^{-sigma} f
    std::vector<double> grad_rho;
    double timelike_gap = 0.0;   // |X.X + e^{-2 sigma}|
    Residual chen;               // nabla_k X_j - rho g_kj
    Residual ckv;                // nabla_j rho - (A - B)/(1 - n) X_j
    bool homothetic = false;     // |A - B| below tolerance
};

/// Uses nabla sigma = omega = f u, so nabla X and nabla rho are exact.
ConcircularData chen_at(const FluidFields& ff, double sigma, double tol = 1e-7);

struct ChenReport {
    std::vector<ConcircularData> points;
    Residual chen, ckv;
    double path_defect = 0.0;
    double timelike_gap = 0.0;
};

ChenReport chen_check(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points,
                      std::span<const double> basepoint, const QuadratureOptions& opts = {}, double tol = 1e-7);

// ---------------------------------------------------------------------------
// Weyl tensor

struct WeylElectric {
    Residual electric;  // C_{jklm} u^m
    Residual full;      // C_{jklm}
};

WeylElectric weyl_electric_check(const CurvaturePoint& cp, std::span<const double> u_up);

// ---------------------------------------------------------------------------
// Identity ladder

enum class LadderIdentity {
    Divergence,   // nabla^m(B u_j u_m) = 1/2 nabla_j[(n-2)A - B]
    Curl,         // nabla_k(B u_j u_l) - nabla_l(B u_j u_k) = -(g_jl nabla_k gamma - g_jk nabla_l gamma)/(2(n-1))
    Transvected,  // (nabla_k + u_k u^l nabla_l) B + B u^l nabla_l u_k = (nabla_k + u_k u^l nabla_l) gamma / (2(n-1))
    Bianchi,      // (nabla_k + u_k u^i nabla_i) B + B u^m nabla_m u_k = 1/2 (nabla_k + u_k u^i nabla_i) gamma
    GammaFlow,    // (nabla_j + u_j u^k nabla_k) gamma = 0
    BFlow,        // (nabla_j + u_j u^k nabla_k) B + B u^m nabla_m u_j = 0
    Acceleration, // B (nabla_k + u_k u^m nabla_m) u_j = (u_j nabla_k - g_jk u^l nabla_l) gamma / (2(n-1))
    BuClosed,     // nabla_k(B u_j) = nabla_j(B u_k)
    GammaAligned, // u_j nabla_k gamma = u_k nabla_j gamma
};

inline constexpr int kLadderSize = 9;

const char* ladder_name(LadderIdentity id);
const char* ladder_anchor(LadderIdentity id);

struct LadderReport {
    std::array<Residual, kLadderSize> residuals{};

    const Residual& operator[](LadderIdentity id) const { return residuals[static_cast<int>(id)]; }
    LadderReport& merge(const LadderReport& o);
    double worst() const;
};

/// `B_shift`, if given, is added to B (and hence gamma) while the Ricci tensor is left alone.
LadderReport ladder_at(const FluidFields& ff, const Jet<1>* B_shift = nullptr);

LadderReport identity_ladder(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points,
                             const std::optional<std::string>& B_shift = std::nullopt);

// ---------------------------------------------------------------------------
// Soliton form R_ij + nabla_i nabla_j theta - eta theta_i theta_j = lambda g_ij

struct SolitonReport {
    double lambda = 0.0;  // A + f
    double eta = 0.0;     // B + f
    Residual residual;
};

/// Uses nabla theta = u, so the Hessian of theta is nabla u.
SolitonReport soliton_at(const FluidFields& ff, const CurvaturePoint& cp);

struct SolitonSummary {
    Residual residual;
    double lambda_min = 0, lambda_max = 0, eta_max_abs = 0;
    double theta_path_defect = 0.0;
    std::vector<double> theta;
    bool gradient_ricci_soliton = false;  // lambda constant and eta = 0 across points
};

SolitonSummary soliton_form_check(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points,
                                  std::span<const double> basepoint, double tol = 1e-7,
                                  const QuadratureOptions& opts = {});

}  // namespace grwcert
