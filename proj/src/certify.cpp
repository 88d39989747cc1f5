#include "grwcert/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "grwcert/curvature.hpp"
#include "grwcert/error.hpp"
#include "grwcert/grw.hpp"
#include "grwcert/physics.hpp"
#include "grwcert/specfile.hpp"

namespace grwcert {

const char* to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
    }
    return "?";
}

void RunConfig::validate() const
{
    if (points < 1) throw Error("points must be at least 1");
    if (workers < 1) throw Error("workers must be at least 1");
    for (double t : {sanity_tol, hypothesis_tol, conclusion_tol, cluster_tol})
        if (!(t > 0.0)) throw Error("tolerances must be positive");
    if (!(kappa > 0.0)) throw Error("kappa must be positive");
    if (quadrature.order < 1 || quadrature.panels < 1) throw Error("quadrature order and panels must be positive");
}

const CheckRecord* CertificationReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

using json = nlohmann::json;

enum class Tol { Sanity, Hypothesis, Conclusion };

struct CheckDef {
    std::string name;
    std::string role;
    std::string anchor;
    Tol tol;
    std::string empty_reason;  // used when no point produced a sample
};

constexpr const char* kNoVelocity = "not evaluable: needs a closed-form velocity_field";
constexpr const char* kNoFiber = "chart carries no warped-product data";

std::vector<CheckDef> check_table()
{
    std::vector<CheckDef> t = {
        {"sanity.first_bianchi", "sanity", "R_{jklm} + R_{kljm} + R_{ljkm} = 0", Tol::Sanity, ""},
        {"sanity.second_bianchi", "sanity", "∇_{[a} R_{bc]de} = 0", Tol::Sanity, ""},
        {"sanity.weyl_traceless", "sanity", "C_{jkm}^m = 0", Tol::Sanity, ""},
        {"sanity.ricci_symmetric", "sanity", "R_{jk} = R_{kj}", Tol::Sanity, ""},
        {"hypothesis.perfect_fluid", "hypothesis", "R_{kl} = A g_{kl} + B u_k u_l, B ≠ 0", Tol::Hypothesis, ""},
        {"hypothesis.closed_u", "hypothesis", "∇_k u_j = ∇_j u_k", Tol::Hypothesis, kNoVelocity},
        {"hypothesis.div_weyl", "hypothesis", "∇_m C_{jkl}^m = 0", Tol::Hypothesis, ""},
        {"fluid.einstein_form", "fluid", "R_{kl} = A g_{kl}", Tol::Hypothesis,
         "no point has an Einstein-degenerate Ricci tensor"},
        {"conclusion.torse_forming", "conclusion", "∇_k u_j = f (u_k u_j + g_{kj})", Tol::Conclusion, kNoVelocity},
        {"conclusion.omega_alignment", "conclusion", "f u_k = ∇_k γ / (2B(n-1))", Tol::Conclusion,
         "B is negligible at every point"},
        {"conclusion.concircular", "conclusion", "∇_j ω_k = ∇_k ω_j, ω = f u", Tol::Conclusion, kNoVelocity},
        {"conclusion.sigma_path", "conclusion", "σ = ∫ ω is path independent", Tol::Conclusion, kNoVelocity},
        {"conclusion.chen_vector", "conclusion", "∇_k X_j = ρ g_{kj}, X = e^{-σ} u", Tol::Conclusion, kNoVelocity},
        {"conclusion.ckv_gradient", "conclusion", "∇_j ρ = (A - B)/(1 - n) X_j", Tol::Conclusion, kNoVelocity},
        {"conclusion.weyl_electric", "conclusion", "C_{jkl}^m u_m = 0", Tol::Conclusion,
         "no unit timelike velocity at any point"},
        {"conclusion.weyl_vanishes", "conclusion", "C_{jklm} = 0", Tol::Conclusion,
         "no unit timelike velocity at any point"},
        {"conclusion.soliton_form", "conclusion", "R_{ij} + ∇_i∇_j θ - η θ_i θ_j = λ g_{ij}, λ = A + f, η = B + f",
         Tol::Conclusion, kNoVelocity},
    };
    for (int i = 0; i < kLadderSize; ++i) {
        const auto id = static_cast<LadderIdentity>(i);
        t.push_back({ladder_name(id), "ladder", ladder_anchor(id), Tol::Conclusion, kNoVelocity});
    }
    const std::vector<CheckDef> tail = {
        {"physics.geodesic", "physics", "u^k ∇_k u_j = 0", Tol::Conclusion, kNoVelocity},
        {"physics.motion_energy", "physics", "u^k ∇_k μ + (p + μ) ∇_k u^k = 0", Tol::Conclusion, kNoVelocity},
        {"physics.motion_momentum", "physics", "(∇_j + u_j u^k ∇_k) p + (p + μ) u^k ∇_k u_j = 0", Tol::Conclusion,
         kNoVelocity},
        {"physics.eos", "physics", "∇p ∧ ∇μ = 0", Tol::Conclusion, kNoVelocity},
        {"physics.homothetic_equivalence", "physics", "A = B ⇔ ∇ρ = 0 ⇔ p = (3-n)/(n-1) μ", Tol::Conclusion,
         kNoVelocity},
        {"converse.fiber_einstein", "converse", "R*_{αβ} = (R*/(n-1)) g*_{αβ}", Tol::Hypothesis, kNoFiber},
        {"converse.A", "converse", "A = (R*/(n-1) + (n-2) q'^2 + q q'') / q^2", Tol::Conclusion, kNoFiber},
        {"converse.B", "converse", "B = A - (n-1) q''/q", Tol::Conclusion,
         "no point has a perfect-fluid decomposition with B ≠ 0"},
    };
    t.insert(t.end(), tail.begin(), tail.end());
    return t;
}

struct Sample {
    Residual r;
    bool failed = false;
    std::string note;
    std::map<std::string, double> values;
};

struct PointResult {
    std::map<std::string, Sample> samples;
    std::map<std::string, std::string> errors;
    std::optional<FluidStatus> status;
    std::optional<EosSample> eos;
    std::optional<HomotheticSample> homothetic;
};

struct Context {
    const MetricChart& chart;
    const RunConfig& config;
    std::optional<VectorField> u;
    std::optional<MetricChart> fiber;
    CovectorFunction omega;
    ChartPoint basepoint;
    std::vector<std::string> all_names;
    std::vector<std::string> velocity_names;
};

/// max |R_kl - A g_kl - B u_k u_l|, scaled by max |R_kl|.
Residual ricci_mismatch(const CurvaturePoint& cp, double A, double B, std::span<const double> u)
{
    double m = 0.0;
    for (int k = 0; k < cp.n; ++k)
        for (int l = 0; l < cp.n; ++l) {
            const double uu = u.empty() ? 0.0 : u[k] * u[l];
            m = std::max(m, std::abs(cp.ric(k, l) - A * cp.g(k, l) - B * uu));
        }
    return Residual::of(m, max_abs(cp.ricci));
}

PointResult evaluate_point(const Context& ctx, const ChartPoint& p)
{
    PointResult r;
    auto guard = [&](const std::vector<std::string>& names, auto&& fn) {
        try {
            fn();
            return true;
        } catch (const std::exception& e) {
            for (const auto& n : names) r.errors.emplace(n, e.what());
            return false;
        }
    };
    auto put = [&](const std::string& name, Residual res, std::map<std::string, double> values = {}) {
        Sample s;
        s.r = res;
        s.values = std::move(values);
        r.samples[name] = std::move(s);
    };

    const MetricChart& chart = ctx.chart;
    const RunConfig& cfg = ctx.config;
    const int n = chart.dim();

    std::optional<CurvaturePoint> cp;
    if (!guard(ctx.all_names, [&] { cp = curvature_at(chart, p); })) return r;

    guard({"sanity.first_bianchi"}, [&] { put("sanity.first_bianchi", first_bianchi_residual(*cp)); });
    guard({"sanity.second_bianchi"}, [&] { put("sanity.second_bianchi", second_bianchi_residual(*cp)); });
    guard({"sanity.weyl_traceless"}, [&] { put("sanity.weyl_traceless", weyl_trace_residual(*cp)); });
    guard({"sanity.ricci_symmetric"}, [&] { put("sanity.ricci_symmetric", ricci_symmetry_residual(*cp)); });
    guard({"hypothesis.div_weyl"}, [&] { put("hypothesis.div_weyl", div_weyl_residual(*cp)); });

    FluidDecomposition fd;
    guard({"hypothesis.perfect_fluid", "fluid.einstein_form"}, [&] {
        fd = fluid_decompose(*cp, cfg.cluster_tol);
        r.status = fd.status;
        Sample s;
        s.values = {{"A", fd.A}, {"B", fd.B}};
        if (fd.ok()) {
            s.r = ricci_mismatch(*cp, fd.A, fd.B, fd.u);
        } else {
            s.failed = true;
            s.note = std::string("decomposition ") + to_string(fd.status);
        }
        r.samples["hypothesis.perfect_fluid"] = s;
        if (fd.degenerate()) put("fluid.einstein_form", ricci_mismatch(*cp, fd.A, 0.0, {}), {{"A", fd.A}});
    });

    if (ctx.fiber) {
        guard({"converse.fiber_einstein", "converse.A", "converse.B"}, [&] {
            const ChartPoint fp(p.begin() + 1, p.end());
            put("converse.fiber_einstein", fiber_einstein_at(curvature_at(*ctx.fiber, fp)));
            const auto c = converse_at(chart, *ctx.fiber, *cp, cfg.cluster_tol);
            put("converse.A", c.A, {{"A_formula", c.A_formula}, {"A_computed", c.A_computed}});
            if (c.status == FluidStatus::Ok)
                put("converse.B", c.B,
                    {{"B_formula", c.B_formula}, {"B_computed", c.B_computed}, {"B_printed_gap", c.B_printed_gap.scaled}});
        });
    }

    auto weyl = [&](std::span<const double> u_up) {
        guard({"conclusion.weyl_electric", "conclusion.weyl_vanishes"}, [&] {
            const auto w = weyl_electric_check(*cp, u_up);
            put("conclusion.weyl_electric", w.electric);
            put("conclusion.weyl_vanishes", w.full);
        });
    };

    if (!ctx.u) {
        if (fd.ok()) weyl(fd.u_up);
        return r;
    }

    std::optional<FluidFields> ff;
    if (!guard(ctx.velocity_names, [&] { ff = fluid_fields_at(chart, *cp, *ctx.u); })) return r;

    std::vector<double> u(n), u_up(n);
    for (int i = 0; i < n; ++i) {
        u[i] = ff->uv(i);
        u_up[i] = ff->uu(i);
    }
    if (auto it = r.samples.find("hypothesis.perfect_fluid"); it != r.samples.end() && fd.ok())
        it->second.r.merge(ricci_mismatch(*cp, ff->A.value(), ff->B.value(), u));

    guard({"hypothesis.closed_u"}, [&] { put("hypothesis.closed_u", closed_residual(*ff)); });

    guard({"conclusion.torse_forming", "conclusion.omega_alignment"}, [&] {
        const auto td = torse_decompose(*ff);
        put("conclusion.torse_forming", td.residual, {{"f", td.f}});
        if (td.f_gamma_gap && td.omega_gamma_gap)
            put("conclusion.omega_alignment", Residual::of(std::max(*td.f_gamma_gap, *td.omega_gamma_gap), std::abs(td.f)));
    });
    guard({"conclusion.concircular"}, [&] { put("conclusion.concircular", omega_curl_residual(*ff)); });

    const std::vector<std::string> sigma_names = {"conclusion.sigma_path", "conclusion.chen_vector",
                                                  "conclusion.ckv_gradient", "physics.homothetic_equivalence"};
    guard(sigma_names, [&] {
        const auto sigma = line_integral(ctx.omega, ctx.basepoint, p, cfg.quadrature);
        put("conclusion.sigma_path", Residual::of(sigma.path_defect, std::abs(sigma.value)),
            {{"sigma", sigma.value}, {"convergence_gap", sigma.convergence_gap}});
        const auto c = chen_at(*ff, sigma.value, cfg.conclusion_tol);
        put("conclusion.chen_vector", c.chen, {{"rho", c.rho}, {"timelike_gap", c.timelike_gap}});
        put("conclusion.ckv_gradient", c.ckv);
        double g2 = 0.0;
        for (double x : c.grad_rho) g2 += x * x;
        const auto fluid = fluid_from_AB(ff->A.value(), ff->B.value(), cfg.kappa, n);
        r.homothetic = HomotheticSample{ff->A.value(), ff->B.value(), std::sqrt(g2), fluid.p, fluid.mu, n};
    });

    weyl(u_up);

    guard({"conclusion.soliton_form"}, [&] {
        const auto s = soliton_at(*ff, *cp);
        put("conclusion.soliton_form", s.residual, {{"lambda", s.lambda}, {"eta", s.eta}});
    });

    std::vector<std::string> ladder_names;
    for (int i = 0; i < kLadderSize; ++i) ladder_names.push_back(ladder_name(static_cast<LadderIdentity>(i)));
    guard(ladder_names, [&] {
        const auto lr = ladder_at(*ff);
        for (int i = 0; i < kLadderSize; ++i) put(ladder_names[i], lr.residuals[i]);
    });

    guard({"physics.geodesic"}, [&] { put("physics.geodesic", geodesic_residual(*ff)); });
    guard({"physics.motion_energy", "physics.motion_momentum", "physics.eos"}, [&] {
        const auto fj = fluid_jets(*ff, cfg.kappa);
        const auto m = motion_at(*ff, fj.p, fj.mu);
        const std::map<std::string, double> pm = {{"p", fj.p.value()}, {"mu", fj.mu.value()}};
        put("physics.motion_energy", m.energy, pm);
        put("physics.motion_momentum", m.momentum, pm);
        r.eos = eos_sample(fj);
    });
    return r;
}

bool selected(const std::vector<std::string>& selection, const std::string& name)
{
    if (selection.empty()) return true;
    for (const auto& s : selection)
        if (name == s || (name.size() > s.size() && name.compare(0, s.size(), s) == 0 && name[s.size()] == '.'))
            return true;
    return false;
}

double tolerance_for(Tol t, const RunConfig& cfg)
{
    switch (t) {
    case Tol::Sanity: return cfg.sanity_tol;
    case Tol::Hypothesis: return cfg.hypothesis_tol;
    case Tol::Conclusion: return cfg.conclusion_tol;
    }
    return 0.0;
}

void finish(CheckRecord& rec, bool failed)
{
    if (!rec.errors.empty() || failed || !(rec.residual <= rec.tolerance))
        rec.status = CheckStatus::Fail;
    else
        rec.status = CheckStatus::Pass;
}

CheckRecord aggregate(const CheckDef& def, const std::vector<PointResult>& results, const RunConfig& cfg)
{
    CheckRecord rec;
    rec.name = def.name;
    rec.role = def.role;
    rec.anchor = def.anchor;
    rec.tolerance = tolerance_for(def.tol, cfg);
    const int total = static_cast<int>(results.size());
    bool failed = false;
    std::map<std::string, int> note_counts;
    for (int i = 0; i < total; ++i) {
        const auto& pr = results[i];
        if (auto e = pr.errors.find(def.name); e != pr.errors.end()) rec.errors.push_back({i, e->second});
        auto it = pr.samples.find(def.name);
        if (it == pr.samples.end()) continue;
        const Sample& s = it->second;
        ++rec.evaluated;
        if (s.failed) {
            failed = true;
            ++note_counts[s.note];
        }
        const double v = s.r.scaled;
        if (!rec.worst_point || (!std::isnan(rec.residual) && (std::isnan(v) || v > rec.residual))) {
            rec.residual = v;
            rec.worst_point = i;
        }
        rec.raw = std::max(rec.raw, s.r.raw);
        for (const auto& [k, v] : s.values) {
            const std::string lo = k + "_min", hi = k + "_max";
            auto [l, fresh] = rec.values.emplace(lo, v);
            if (!fresh) l->second = std::min(l->second, v);
            auto [h, fresh2] = rec.values.emplace(hi, v);
            if (!fresh2) h->second = std::max(h->second, v);
        }
    }
    for (const auto& [note, count] : note_counts)
        rec.notes.push_back(note + " at " + std::to_string(count) + " of " + std::to_string(total) + " points");
    if (rec.evaluated == 0 && rec.errors.empty()) {
        rec.status = CheckStatus::Skipped;
        rec.skipped_reason = def.empty_reason.empty() ? "no point produced a value" : def.empty_reason;
        return rec;
    }
    if (rec.evaluated > 0 && rec.evaluated + static_cast<int>(rec.errors.size()) < total)
        rec.notes.push_back("evaluated at " + std::to_string(rec.evaluated) + " of " + std::to_string(total) +
                            " points");
    finish(rec, failed);
    return rec;
}

void collect_errors(CheckRecord& rec, const std::vector<PointResult>& results)
{
    for (std::size_t i = 0; i < results.size(); ++i)
        if (auto e = results[i].errors.find(rec.name); e != results[i].errors.end())
            rec.errors.push_back({static_cast<int>(i), e->second});
}

CheckRecord aggregate_eos(const CheckDef& def, const std::vector<PointResult>& results, const RunConfig& cfg)
{
    CheckRecord rec;
    rec.name = def.name;
    rec.role = def.role;
    rec.anchor = def.anchor;
    rec.tolerance = tolerance_for(def.tol, cfg);
    collect_errors(rec, results);
    std::vector<EosSample> samples;
    for (const auto& pr : results)
        if (pr.eos) samples.push_back(*pr.eos);
    rec.evaluated = static_cast<int>(samples.size());
    if (samples.empty() && rec.errors.empty()) {
        rec.status = CheckStatus::Skipped;
        rec.skipped_reason = def.empty_reason;
        return rec;
    }
    const auto e = eos_check(samples, cfg.conclusion_tol);
    rec.residual = rec.raw = e.parallelism;
    rec.values = {{"parallelism", e.parallelism},
                  {"fit_residual", e.fit_residual},
                  {"min_p_plus_mu", e.min_p_plus_mu},
                  {"min_abs_p_plus_mu", e.min_abs_p_plus_mu}};
    if (e.w)
        rec.values["w"] = *e.w;
    if (e.degenerate_fit)
        rec.notes.push_back("mu is constant over the samples; no slope w is fitted");
    else if (e.fit_residual > cfg.conclusion_tol * (1.0 + std::abs(e.w.value_or(0.0))))
        rec.notes.push_back("p is not linear in mu over the samples");
    finish(rec, false);
    return rec;
}

CheckRecord aggregate_homothetic(const CheckDef& def, const std::vector<PointResult>& results, const RunConfig& cfg)
{
    CheckRecord rec;
    rec.name = def.name;
    rec.role = def.role;
    rec.anchor = def.anchor;
    rec.tolerance = tolerance_for(def.tol, cfg);
    collect_errors(rec, results);
    std::vector<HomotheticSample> samples;
    for (const auto& pr : results)
        if (pr.homothetic) samples.push_back(*pr.homothetic);
    rec.evaluated = static_cast<int>(samples.size());
    if (samples.empty() && rec.errors.empty()) {
        rec.status = CheckStatus::Skipped;
        rec.skipped_reason = def.empty_reason;
        return rec;
    }
    const auto h = homothetic_check(samples, cfg.conclusion_tol);
    rec.residual = rec.raw = h.max_eos_gap;
    rec.values = {{"homothetic_points", h.homothetic_points},
                  {"proper_points", h.proper_points},
                  {"mixed_points", h.mixed_points}};
    if (!h.equivalent) rec.notes.push_back("the three homothety conditions disagree at some point");
    finish(rec, !h.equivalent);
    return rec;
}

}  // namespace

CertificationReport certify(const MetricChart& chart, const RunConfig& config)
{
    config.validate();
    const auto& spec = chart.spec();

    CertificationReport rep;
    rep.name = chart.name();
    rep.dimension = chart.dim();
    rep.signature = chart.signature();
    rep.coordinates = chart.coordinates();
    rep.config = config;
    rep.velocity_supplied = spec.velocity_field.has_value();
    rep.warped_product = spec.warped_product.has_value();
    rep.basepoint = config.basepoint ? *config.basepoint : chart.probe_point();
    if (static_cast<int>(rep.basepoint.size()) != chart.dim()) throw Error("basepoint has the wrong dimension");
    if (!chart.in_domain(rep.basepoint)) throw Error("basepoint lies outside the domain");
    rep.points = sample_points(chart, config.points, config.seed);

    const auto table = check_table();
    Context ctx{chart, config, std::nullopt, std::nullopt, {}, rep.basepoint, {}, {}};
    for (const auto& d : table) {
        ctx.all_names.push_back(d.name);
        if (d.role != "sanity" && d.role != "converse" && d.name != "hypothesis.div_weyl" &&
            d.name != "hypothesis.perfect_fluid" && d.name != "fluid.einstein_form")
            ctx.velocity_names.push_back(d.name);
    }
    if (spec.velocity_field) {
        ctx.u = VectorField::closed_form(chart, *spec.velocity_field, VectorField::Index::Covariant, true);
        ctx.omega = omega_function(chart, *ctx.u);
    }
    if (spec.warped_product) ctx.fiber = fiber_chart(chart);

    std::vector<PointResult> results(rep.points.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < rep.points.size();) results[i] = evaluate_point(ctx, rep.points[i]);
    };
    const int workers = std::min<int>(config.workers, static_cast<int>(rep.points.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (const auto& pr : results)
        if (pr.status) ++rep.fluid_status[to_string(*pr.status)];

    for (const auto& d : table) {
        CheckRecord rec;
        if (!selected(config.checks, d.name)) {
            rec.name = d.name;
            rec.role = d.role;
            rec.anchor = d.anchor;
            rec.tolerance = tolerance_for(d.tol, config);
            rec.skipped_reason = "not selected";
        } else if (d.name == "physics.eos") {
            rec = aggregate_eos(d, results, config);
        } else if (d.name == "physics.homothetic_equivalence") {
            rec = aggregate_homothetic(d, results, config);
        } else {
            rec = aggregate(d, results, config);
        }
        if (d.role == "converse" && !rep.warped_product && rec.status == CheckStatus::Skipped &&
            rec.skipped_reason != "not selected")
            rec.skipped_reason = kNoFiber;
        if (d.name == "conclusion.weyl_vanishes" && chart.dim() != 4 && rec.status != CheckStatus::Skipped) {
            rec.required = false;
            rec.notes.push_back("reported only; vanishing Weyl is asserted in four dimensions");
        }
        if (d.name == "converse.B" && rec.status != CheckStatus::Skipped) rec.notes.push_back(kConverseResolutionNote);
        rep.checks.push_back(std::move(rec));
    }

    rep.hypotheses_hold = true;
    for (const auto& c : rep.checks)
        if (c.role == "hypothesis" && c.status == CheckStatus::Fail) rep.hypotheses_hold = false;
    const auto* fiber = rep.find("converse.fiber_einstein");
    const bool fiber_fails = fiber && fiber->status == CheckStatus::Fail;

    if (!rep.hypotheses_hold) {
        rep.conclusions_informational = true;
        rep.notes.push_back("hypotheses fail: conclusion, ladder, physics and converse checks are informational");
    }
    if (fiber_fails) rep.notes.push_back("fiber is not Einstein: converse formulas are informational");
    for (auto& c : rep.checks) {
        const bool downstream = c.role == "conclusion" || c.role == "ladder" || c.role == "physics";
        const bool converse_formula = c.name == "converse.A" || c.name == "converse.B";
        if ((!rep.hypotheses_hold && (downstream || converse_formula)) || (fiber_fails && converse_formula))
            c.required = false;
    }
    if (!rep.velocity_supplied)
        rep.notes.push_back("no velocity_field: gradient checks are not evaluable and were skipped");

    rep.verdict = true;
    for (const auto& c : rep.checks)
        if (c.required && c.status == CheckStatus::Fail) rep.verdict = false;
    return rep;
}

CertificationReport run_certify(const std::string& spec_path, const RunConfig& config)
{
    return certify(compile_chart(load_spec(spec_path)), config);
}

std::string report_json(const CertificationReport& rep)
{
    const auto& cfg = rep.config;
    json doc;
    doc["report_schema"] = kReportSchemaVersion;
    doc["metric"] = {{"name", rep.name},
                     {"dimension", rep.dimension},
                     {"signature", to_string(rep.signature)},
                     {"coordinates", rep.coordinates},
                     {"velocity_supplied", rep.velocity_supplied},
                     {"warped_product", rep.warped_product}};
    doc["environment"] = {
        {"seed", cfg.seed},
        {"points", cfg.points},
        {"kappa", cfg.kappa},
        {"basepoint", rep.basepoint},
        {"tolerances",
         {{"sanity", cfg.sanity_tol},
          {"hypothesis", cfg.hypothesis_tol},
          {"conclusion", cfg.conclusion_tol},
          {"cluster", cfg.cluster_tol}}},
        {"quadrature",
         {{"order", cfg.quadrature.order},
          {"panels", cfg.quadrature.panels},
          {"convergence_tol", cfg.quadrature.convergence_tol}}},
        {"checks_selected", cfg.checks},
    };
    doc["fluid_status"] = rep.fluid_status;
    doc["hypotheses_hold"] = rep.hypotheses_hold;
    doc["conclusions"] = rep.conclusions_informational ? "informational" : "required";
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json j = {{"name", c.name},
                  {"role", c.role},
                  {"anchor", c.anchor},
                  {"required", c.required},
                  {"status", to_string(c.status)},
                  {"tolerance", c.tolerance},
                  {"evaluated", c.evaluated},
                  {"notes", c.notes},
                  {"values", c.values}};
        if (c.status == CheckStatus::Skipped) {
            j["skipped_reason"] = c.skipped_reason;
        } else {
            j["residual"] = c.residual;
            j["raw"] = c.raw;
        }
        if (c.worst_point)
            j["worst_point"] = {{"index", *c.worst_point}, {"coordinates", rep.points[*c.worst_point]}};
        if (!c.errors.empty()) {
            json errs = json::array();
            for (const auto& e : c.errors) errs.push_back({{"point", e.point}, {"message", e.message}});
            j["errors"] = errs;
        }
        checks.push_back(std::move(j));
    }
    doc["checks"] = std::move(checks);
    doc["notes"] = rep.notes;
    doc["verdict"] = rep.verdict ? "pass" : "fail";
    return doc.dump(2) + "\n";
}

namespace {

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

}  // namespace

std::string report_text(const CertificationReport& rep)
{
    const auto& cfg = rep.config;
    std::ostringstream os;
    os << rep.name << ": n = " << rep.dimension << ", " << to_string(rep.signature) << ", " << cfg.points
       << " points, seed " << cfg.seed << "\n";
    os << "tolerances: sanity " << sci(cfg.sanity_tol) << ", hypothesis " << sci(cfg.hypothesis_tol)
       << ", conclusion " << sci(cfg.conclusion_tol) << ", cluster " << sci(cfg.cluster_tol) << "\n";
    os << "fluid decomposition:";
    for (const auto& [status, count] : rep.fluid_status) os << " " << status << " " << count;
    os << "\n";
    os << (rep.hypotheses_hold ? "hypotheses hold" : "hypotheses fail") << "; conclusions are "
       << (rep.conclusions_informational ? "informational" : "required") << "\n\n";

    for (const auto& c : rep.checks) {
        char line[160];
        if (c.status == CheckStatus::Skipped) {
            std::snprintf(line, sizeof line, "  %-8s %-34s %-21s ", "skipped", c.name.c_str(), "");
            os << line << c.anchor << "\n           reason: " << c.skipped_reason << "\n";
            continue;
        }
        const std::string status = std::string(to_string(c.status)) + (c.required ? "" : "*");
        const std::string cmp = sci(c.residual) + (c.residual <= c.tolerance ? " <= " : " >  ") + sci(c.tolerance);
        std::snprintf(line, sizeof line, "  %-8s %-34s %-21s ", status.c_str(), c.name.c_str(), cmp.c_str());
        os << line << c.anchor << "\n";
        for (const auto& note : c.notes) os << "           " << note << "\n";
        for (std::size_t i = 0; i < c.errors.size() && i < 3; ++i)
            os << "           error at point " << c.errors[i].point << ": " << c.errors[i].message << "\n";
        if (c.errors.size() > 3) os << "           (" << c.errors.size() - 3 << " more errors)\n";
    }
    os << "\n  * informational, not counted in the verdict\n";
    for (const auto& note : rep.notes) os << "note: " << note << "\n";
    os << "verdict: " << (rep.verdict ? "PASS" : "FAIL") << "\n";
    return os.str();
}

void emit_report(const CertificationReport& report, ReportFormat format, const std::string& path)
{
    const std::string body = format == ReportFormat::Json ? report_json(report) : report_text(report);
    if (path == "-") {
        std::cout << body << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace grwcert
