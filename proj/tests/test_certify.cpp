#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "grwcert/certify.hpp"
#include "grwcert/error.hpp"
#include "grwcert/grw.hpp"
#include "grwcert/specfile.hpp"

using namespace grwcert;
using nlohmann::json;

namespace {

std::string write_temp(const std::string& name, const std::string& body)
{
    const auto path = std::filesystem::temp_directory_path() / ("grwcert_test_" + name);
    std::ofstream(path) << body;
    return path.string();
}

json minimal_spec()
{
    return json::parse(R"({
        "schema": 1,
        "name": "flat2",
        "dimension": 2,
        "signature": "lorentzian",
        "coordinates": ["t", "x"],
        "metric": {"0,0": "-1", "1,1": "1"},
        "domain": {"ranges": {"t": [0, 1], "x": [0, 1]}}
    })");
}

std::string schema_field(const json& doc)
{
    try {
        parse_spec(doc.dump());
    } catch (const SchemaError& e) {
        return e.field();
    }
    return "<accepted>";
}

RunConfig small(int points = 8)
{
    RunConfig c;
    c.points = points;
    return c;
}

}  // namespace

TEST_CASE("parse_spec")
{
    SUBCASE("minimal document")
    {
        const auto s = parse_spec(minimal_spec().dump());
        CHECK(s.dimension == 2);
        CHECK(s.metric.size() == 2);
        CHECK_FALSE(s.velocity_field.has_value());
        CHECK(s.ranges[1] == std::pair<double, double>{0.0, 1.0});
    }
    SUBCASE("schema errors name the field")
    {
        auto doc = minimal_spec();
        doc.erase("dimension");
        CHECK(schema_field(doc) == "dimension");

        doc = minimal_spec();
        doc["metric"]["1,0"] = "0.1";
        CHECK(schema_field(doc) == "metric.1,0");

        doc = minimal_spec();
        doc["domain"]["ranges"].erase("x");
        CHECK(schema_field(doc) == "domain.ranges.x");

        doc = minimal_spec();
        doc["schema"] = 2;
        CHECK(schema_field(doc) == "schema");

        doc = minimal_spec();
        doc["velocity_field"] = {"-1"};
        CHECK(schema_field(doc) == "velocity_field");

        doc = minimal_spec();
        doc["metrc"] = json::object();
        CHECK(schema_field(doc) == "metrc");

        doc = minimal_spec();
        doc["coordinates"] = {"t", "t"};
        CHECK(schema_field(doc) == "coordinates[1]");

        doc = minimal_spec();
        doc["domain"]["exclusions"] = {{{"min", 0.1}}};
        CHECK(schema_field(doc) == "domain.exclusions[0].expr");

        CHECK_THROWS_AS(parse_spec("{ not json"), SchemaError);
    }
    SUBCASE("the missing-dimension message names the field")
    {
        auto doc = minimal_spec();
        doc.erase("dimension");
        CHECK_THROWS_WITH_AS(parse_spec(doc.dump()), doctest::Contains("'dimension'"), SchemaError);
    }
    SUBCASE("catalog specs round-trip")
    {
        for (const auto& name : catalog_names()) {
            INFO(name);
            const std::string once = spec_to_json(catalog_get(name).spec);
            CHECK(spec_to_json(parse_spec(once)) == once);
        }
    }
    SUBCASE("missing file")
    {
        CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), Error);
    }
}

TEST_CASE("RunConfig validation")
{
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    c.points = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = RunConfig{};
    c.conclusion_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = RunConfig{};
    c.workers = 0;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("run_certify")
{
    SUBCASE("frw-dust through a generated spec file passes")
    {
        const auto path = write_temp("frw_dust.json", spec_to_json(catalog_get("frw-dust").spec));
        const auto rep = run_certify(path, small(20));
        CHECK(rep.verdict);
        CHECK(rep.hypotheses_hold);
        CHECK_FALSE(rep.conclusions_informational);
        for (const auto& c : rep.checks) {
            INFO(c.name);
            CHECK(c.status != CheckStatus::Fail);
        }
    }
    SUBCASE("non-Einstein fiber: hypotheses fail and conclusions are informational")
    {
        const auto rep = certify(catalog_get("grw-nonEinstein-fiber").chart, small());
        CHECK_FALSE(rep.verdict);
        CHECK_FALSE(rep.hypotheses_hold);
        CHECK(rep.conclusions_informational);
        CHECK(rep.find("hypothesis.div_weyl")->status == CheckStatus::Fail);
        for (const auto& c : rep.checks)
            if (c.role == "conclusion" || c.role == "ladder" || c.role == "physics") {
                INFO(c.name);
                CHECK_FALSE(c.required);
                CHECK(c.skipped_reason != "not selected");
            }
        const auto j = json::parse(report_json(rep));
        CHECK(j["conclusions"] == "informational");
    }
    SUBCASE("de Sitter: degenerate branch, A = 3 still verified")
    {
        const auto rep = certify(catalog_get("desitter").chart, small());
        CHECK(rep.fluid_status.at("einstein-degenerate") == 8);
        const auto* e = rep.find("fluid.einstein_form");
        REQUIRE(e);
        CHECK(e->status == CheckStatus::Pass);
        CHECK(e->values.at("A_min") == doctest::Approx(3.0).epsilon(1e-9));
        CHECK(e->values.at("A_max") == doctest::Approx(3.0).epsilon(1e-9));
        CHECK_FALSE(rep.verdict);
    }
    SUBCASE("without a velocity field gradient checks are not evaluable")
    {
        auto spec = catalog_get("einstein-static").spec;
        spec.velocity_field.reset();
        const auto rep = certify(compile_chart(spec), small());
        const auto* closed = rep.find("hypothesis.closed_u");
        CHECK(closed->status == CheckStatus::Skipped);
        CHECK(closed->skipped_reason.find("not evaluable") != std::string::npos);
        CHECK(rep.find("ladder.divergence")->status == CheckStatus::Skipped);
        CHECK(rep.find("conclusion.weyl_electric")->status == CheckStatus::Pass);
        CHECK(rep.find("hypothesis.div_weyl")->status == CheckStatus::Pass);
    }
    SUBCASE("evaluation errors are attributed to the check and the point")
    {
        auto spec = catalog_get("frw-dust").spec;
        (*spec.velocity_field)[1] = "0*ln(x - 0.5)";
        const auto rep = certify(compile_chart(spec), small(30));
        const auto* closed = rep.find("hypothesis.closed_u");
        REQUIRE_FALSE(closed->errors.empty());
        CHECK(closed->status == CheckStatus::Fail);
        for (const auto& e : closed->errors) CHECK(rep.points[e.point][1] <= 0.5);
        CHECK(rep.find("hypothesis.div_weyl")->errors.empty());
        CHECK_FALSE(rep.verdict);
    }
    SUBCASE("check selection")
    {
        auto cfg = small(4);
        cfg.checks = {"ladder", "hypothesis.div_weyl"};
        const auto rep = certify(catalog_get("frw-dust").chart, cfg);
        CHECK(rep.find("sanity.first_bianchi")->skipped_reason == "not selected");
        CHECK(rep.find("ladder.curl")->status == CheckStatus::Pass);
        CHECK(rep.find("hypothesis.div_weyl")->status == CheckStatus::Pass);
        CHECK(rep.verdict);
    }
    SUBCASE("input errors")
    {
        CHECK_THROWS_AS(run_certify(write_temp("bad.json", "{}"), small()), SchemaError);
        auto cfg = small();
        cfg.basepoint = ChartPoint{0.0, 0.0, 0.0, 0.0};
        CHECK_THROWS_AS(certify(catalog_get("frw-dust").chart, cfg), Error);
    }
}

TEST_CASE("emit_report")
{
    const auto rep = certify(catalog_get("einstein-static").chart, small());
    SUBCASE("JSON emitted twice is byte-identical")
    {
        const auto a = write_temp("report_a.json", ""), b = write_temp("report_b.json", "");
        emit_report(rep, ReportFormat::Json, a);
        emit_report(rep, ReportFormat::Json, b);
        std::ifstream fa(a), fb(b);
        const std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
        CHECK_FALSE(sa.empty());
        CHECK(sa == sb);
    }
    SUBCASE("worker count does not change the JSON")
    {
        const auto chart = catalog_get("einstein-static").chart;
        auto cfg = small(12);
        cfg.workers = 4;
        CHECK(report_json(certify(chart, cfg)) == report_json(certify(chart, small(12))));
    }
    SUBCASE("text lists the divergence-free Weyl anchor")
    {
        CHECK(report_text(rep).find("∇_m C_{jkl}^m = 0") != std::string::npos);
    }
    SUBCASE("skipped checks carry skipped_reason")
    {
        const auto j = json::parse(report_json(rep));
        bool seen = false;
        for (const auto& c : j["checks"])
            if (c["status"] == "skipped") {
                CHECK(c.contains("skipped_reason"));
                seen = true;
            }
        CHECK(seen);
        CHECK(j["verdict"] == "pass");
        CHECK(j["report_schema"] == kReportSchemaVersion);
        CHECK_FALSE(j["environment"].contains("workers"));
    }
    SUBCASE("converse resolution is recorded")
    {
        const auto* b = rep.find("converse.B");
        REQUIRE(b);
        CHECK(std::find(b->notes.begin(), b->notes.end(), std::string(kConverseResolutionNote)) != b->notes.end());
    }
    SUBCASE("unwritable path")
    {
        CHECK_THROWS_AS(emit_report(rep, ReportFormat::Text, "/nonexistent/dir/report.txt"), Error);
    }
}
