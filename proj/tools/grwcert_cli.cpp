#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "grwcert/certify.hpp"
#include "grwcert/error.hpp"
#include "grwcert/grw.hpp"
#include "grwcert/specfile.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct Options {
    grwcert::RunConfig config;
    std::optional<double> tol;
    std::string checks;
    std::string json_path;
    std::string text_path = "-";
};

void add_run_options(CLI::App* cmd, Options& o)
{
    cmd->add_option("--points", o.config.points, "Sample points per metric")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.config.seed, "Sampling seed")->capture_default_str();
    cmd->add_option("--tol", o.tol, "Set both hypothesis and conclusion tolerances")->check(CLI::PositiveNumber);
    cmd->add_option("--hyp-tol", o.config.hypothesis_tol, "Hypothesis tolerance")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--concl-tol", o.config.conclusion_tol, "Conclusion, ladder and physics tolerance")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--sanity-tol", o.config.sanity_tol, "Curvature sanity tolerance")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--cluster-tol", o.config.cluster_tol, "Relative eigenvalue clustering threshold")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--kappa", o.config.kappa, "Coupling constant in the field equations")
        ->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--workers", o.config.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--checks", o.checks, "Comma list of check names or groups (sanity, hypothesis, ladder, ...)");
    cmd->add_option("--json", o.json_path, "Write the JSON report here ('-' for stdout)");
    cmd->add_option("--text", o.text_path, "Write the text report here ('-' for stdout, '' to suppress)");
}

std::vector<std::string> split_commas(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

grwcert::RunConfig finalize(Options o, const std::vector<std::string>& forced_checks = {})
{
    if (o.tol) o.config.hypothesis_tol = o.config.conclusion_tol = *o.tol;
    o.config.checks = forced_checks.empty() ? split_commas(o.checks) : forced_checks;
    return o.config;
}

int emit(const grwcert::CertificationReport& rep, const Options& o)
{
    // JSON on stdout replaces the text report there.
    if (!o.text_path.empty() && !(o.text_path == "-" && o.json_path == "-"))
        grwcert::emit_report(rep, grwcert::ReportFormat::Text, o.text_path);
    if (!o.json_path.empty()) grwcert::emit_report(rep, grwcert::ReportFormat::Json, o.json_path);
    return rep.verdict ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Certify perfect-fluid and generalized Robertson-Walker structure of metric charts"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "grwcert 0.1.0");

    Options certify_opts, ladder_opts, run_opts;
    std::string spec_path, ladder_path, entry_name, show_name;

    auto* certify = app.add_subcommand("certify", "Run every check on a spec file");
    certify->add_option("file", spec_path, "Spec file (JSON)")->required();
    add_run_options(certify, certify_opts);

    auto* ladder = app.add_subcommand("ladder", "Run the hypotheses and the identity ladder on a spec file");
    ladder->add_option("file", ladder_path, "Spec file (JSON)")->required();
    add_run_options(ladder, ladder_opts);

    auto* catalog = app.add_subcommand("catalog", "Built-in metrics");
    catalog->require_subcommand(1);
    auto* list = catalog->add_subcommand("list", "List catalog entries");
    auto* run = catalog->add_subcommand("run", "Certify a catalog entry");
    run->add_option("name", entry_name, "Entry name")->required();
    add_run_options(run, run_opts);
    auto* show = catalog->add_subcommand("show", "Print a catalog entry as a spec file");
    show->add_option("name", show_name, "Entry name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInput;
    }

    try {
        if (*certify) return emit(grwcert::run_certify(spec_path, finalize(certify_opts)), certify_opts);
        if (*ladder)
            return emit(grwcert::run_certify(ladder_path, finalize(ladder_opts, {"sanity", "hypothesis", "ladder"})),
                        ladder_opts);
        if (*list) {
            for (const auto& name : grwcert::catalog_names())
                std::cout << name << "\t" << grwcert::catalog_get(name).expected.summary << "\n";
            return kExitPass;
        }
        if (*run) {
            const auto entry = grwcert::catalog_get(entry_name);
            return emit(grwcert::certify(entry.chart, finalize(run_opts)), run_opts);
        }
        if (*show) {
            std::cout << grwcert::spec_to_json(grwcert::catalog_get(show_name).spec);
            return kExitPass;
        }
    } catch (const std::exception& e) {
        std::cerr << "grwcert: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
