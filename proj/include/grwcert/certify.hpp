#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grwcert/chart.hpp"
#include "grwcert/classify.hpp"

namespace grwcert {

inline constexpr int kReportSchemaVersion = 1;

struct RunConfig {
    int points = 50;
    std::uint64_t seed = 1;
    double sanity_tol = 1e-9;
    double hypothesis_tol = 1e-7;
    double conclusion_tol = 1e-7;
    double cluster_tol = kDefaultClusterTol;
    double kappa = 1.0;
    int workers = 1;  // does not affect the report
    std::optional<ChartPoint> basepoint;  // overrides the spec's
    /// Check names or group prefixes ("ladder", "hypothesis.div_weyl"); empty selects everything.
    std::vector<std::string> checks;
    QuadratureOptions quadrature;

    /// Throws Error on a non-positive tolerance, points < 1 or workers < 1.
    void validate() const;
};

enum class CheckStatus { Pass, Fail, Skipped };

const char* to_string(CheckStatus s);

struct PointError {
    int point = 0;
    std::string message;
};

struct CheckRecord {
    std::string name;
    std::string role;    // sanity, fluid, hypothesis, conclusion, ladder, physics, converse
    std::string anchor;  // the identity being checked
    bool required = true;
    CheckStatus status = CheckStatus::Skipped;
    double residual = 0.0;  // max scaled residual
    double raw = 0.0;       // max unscaled residual
    double tolerance = 0.0;
    int evaluated = 0;      // points that contributed
    std::string skipped_reason;
    std::vector<std::string> notes;
    std::map<std::string, double> values;
    std::optional<int> worst_point;
    std::vector<PointError> errors;
};

struct CertificationReport {
    std::string name;
    int dimension = 0;
    Signature signature = Signature::Lorentzian;
    std::vector<std::string> coordinates;
    RunConfig config;
    ChartPoint basepoint;
    std::vector<ChartPoint> points;
    bool velocity_supplied = false;
    bool warped_product = false;
    std::map<std::string, int> fluid_status;  // point count per decomposition status
    bool hypotheses_hold = false;
    bool conclusions_informational = false;
    std::vector<CheckRecord> checks;
    std::vector<std::string> notes;
    bool verdict = false;

    /// nullptr if no check has that name.
    const CheckRecord* find(const std::string& name) const;
};

/// Sample points, evaluate every check at each point on `config.workers`
/// threads, and aggregate in point order.
CertificationReport certify(const MetricChart& chart, const RunConfig& config);

/// load_spec + compile_chart + certify.
CertificationReport run_certify(const std::string& spec_path, const RunConfig& config);

/// Sorted keys, no worker count: identical for identical (spec, config).
std::string report_json(const CertificationReport& report);
std::string report_text(const CertificationReport& report);

enum class ReportFormat { Text, Json };

/// Writes to `path`, or to stdout when path is "-". Throws Error on I/O failure.
void emit_report(const CertificationReport& report, ReportFormat format, const std::string& path);

}  // namespace grwcert
