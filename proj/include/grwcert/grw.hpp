#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grwcert/chart.hpp"
#include "grwcert/classify.hpp"
#include "grwcert/curvature.hpp"

namespace grwcert {

/// Warp function q(t) of -dt^2 + q(t)^2 g*.
struct WarpSpec {
    std::string q;
    std::pair<double, double> t_range{0.0, 1.0};
    std::string t_name = "t";
    double delta = 1e-6;  // q must exceed this on the range
};

/// Assemble the spec of -dt^2 + q^2 g* from a riemannian fiber spec. Fiber
/// coordinates, ranges, exclusions and parameters carry over; basepoint is
/// (t_range.first, fiber basepoint or fiber box center).
ChartSpec warped_product_spec(const std::string& name, const WarpSpec& warp, const ChartSpec& fiber);

/// warped_product_spec, compiled; throws ChartError if the fiber is not
/// riemannian or q <= delta at any of `probe_count` sampled times.
MetricChart build_grw(const std::string& name, const WarpSpec& warp, const ChartSpec& fiber, int probe_count = 32);

/// The fiber chart of a chart carrying warped-product data.
MetricChart fiber_chart(const MetricChart& grw);

/// max |R*_ab - R*/(n-1) g*_ab| with n - 1 the fiber dimension, scaled by 1 + max |R*_ab|.
Residual fiber_einstein_at(const CurvaturePoint& fiber_cp);
Residual fiber_einstein_check(const MetricChart& fiber, std::span<const ChartPoint> points);

/// q, q', q'' at time t.
struct WarpValues {
    double q = 0, dq = 0, ddq = 0;
};
WarpValues warp_at(const MetricChart& grw, double t);

struct ConversePoint {
    FluidStatus status = FluidStatus::Unclustered;
    double A_computed = 0, B_computed = 0;
    double A_formula = 0;
    double B_formula = 0;  // A - (n-1) q''/q
    double B_printed = 0;  // A - (n-1) q'/q, the variant that fails against the Christoffel oracle
    double R_star = 0;
    WarpValues warp;
    Residual A, B, B_printed_gap;
};

struct ConverseReport {
    std::vector<ConversePoint> points;
    Residual A, B;
    Residual B_printed_gap;   // how far the printed q' variant is from the computed B
    bool degenerate = false;  // some point had B = 0; only A compared there
    Residual fiber_einstein;
};

/// The note recorded in reports about the q'/q versus q''/q reading of R_tt and B.
extern const char* const kConverseResolutionNote;

ConversePoint converse_at(const MetricChart& grw, const MetricChart& fiber, const CurvaturePoint& cp,
                          double cluster_tol = kDefaultClusterTol);

ConverseReport converse_check(const MetricChart& grw, std::span<const ChartPoint> points,
                              double cluster_tol = kDefaultClusterTol);

// ---------------------------------------------------------------------------
// Catalog

struct CatalogExpectation {
    FluidStatus fluid = FluidStatus::Ok;
    bool hypotheses_hold = true;       // perfect fluid with B != 0, closed u, divergence-free Weyl
    bool verdict = true;               // expected overall certify verdict
    std::optional<bool> fiber_einstein;
    std::map<std::string, std::string> closed_forms;  // e.g. "A" -> "2/(3 t^2)"
    std::string summary;
};

struct CatalogEntry {
    ChartSpec spec;
    MetricChart chart;
    CatalogExpectation expected;
};

std::vector<std::string> catalog_names();

/// Throws UnknownCatalogEntry.
CatalogEntry catalog_get(const std::string& name);

}  // namespace grwcert
