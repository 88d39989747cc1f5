#include "grwcert/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "grwcert/error.hpp"
#include "grwcert/geometry.hpp"

namespace grwcert {

const char* to_string(FluidStatus s)
{
    switch (s) {
    case FluidStatus::Ok: return "ok";
    case FluidStatus::EinsteinDegenerate: return "einstein-degenerate";
    case FluidStatus::SpacelikeAnomaly: return "spacelike-anomaly";
    case FluidStatus::Unclustered: return "unclustered";
    case FluidStatus::OrientationTie: return "orientation-tie";
    }
    return "?";
}

// ---------------------------------------------------------------------------

FluidDecomposition fluid_decompose(const Tensor<double, 2>& g, const Tensor<double, 2>& ricci, double cluster_tol)
{
    const int n = g.dim();
    Eigen::MatrixXd G(n, n), Ric(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = g(i, j), Ric(i, j) = ricci(i, j);
    const Eigen::MatrixXd mixed = G.partialPivLu().solve(Ric);  // R^i_j

    Eigen::EigenSolver<Eigen::MatrixXd> es(mixed);
    const auto& ev = es.eigenvalues();

    FluidDecomposition out;
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, 1.0 + std::abs(ev(i)));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return ev(a).real() < ev(b).real(); });
    for (int i : order) out.eigenvalues.push_back(ev(i).real());

    for (int i = 0; i < n; ++i)
        if (std::abs(ev(i).imag()) > cluster_tol * scale) return out;  // Unclustered

    const auto spread = [&](int skip) {
        double lo = INFINITY, hi = -INFINITY;
        for (int i = 0; i < n; ++i) {
            if (i == skip) continue;
            lo = std::min(lo, out.eigenvalues[i]);
            hi = std::max(hi, out.eigenvalues[i]);
        }
        return (hi - lo) / scale;
    };
    const auto mean = [&](int skip) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            if (i != skip) s += out.eigenvalues[i];
        return s / (skip < 0 ? n : n - 1);
    };

    if (spread(-1) < cluster_tol) {
        out.status = FluidStatus::EinsteinDegenerate;
        out.A = mean(-1);
        out.B = 0.0;
        return out;
    }
    int distinguished = -1;
    if (spread(0) < cluster_tol) distinguished = 0;
    else if (spread(n - 1) < cluster_tol) distinguished = n - 1;
    if (distinguished < 0) return out;  // Unclustered

    out.A = mean(distinguished);
    out.B = out.A - out.eigenvalues[distinguished];

    const Eigen::VectorXd v = es.eigenvectors().col(order[distinguished]).real();
    const double norm2 = v.dot(G * v);
    if (!(norm2 < -1e-12 * v.squaredNorm() * G.cwiseAbs().maxCoeff())) {
        out.status = FluidStatus::SpacelikeAnomaly;
        return out;
    }
    Eigen::VectorXd up = v / std::sqrt(-norm2);
    if (std::abs(up(0)) < 1e-12 * up.cwiseAbs().maxCoeff()) {
        out.status = FluidStatus::OrientationTie;
        return out;
    }
    if (up(0) < 0) up = -up;
    const Eigen::VectorXd low = G * up;

    out.status = FluidStatus::Ok;
    out.u.assign(low.data(), low.data() + n);
    out.u_up.assign(up.data(), up.data() + n);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            worst = std::max(worst, std::abs(ricci(i, j) - out.A * g(i, j) - out.B * out.u[i] * out.u[j]));
    out.residual = worst / (1.0 + max_abs(ricci));
    return out;
}

FluidDecomposition fluid_decompose(const CurvaturePoint& cp, double cluster_tol)
{
    Tensor<double, 2> g(cp.n), ric(cp.n);
    for (int i = 0; i < cp.n; ++i)
        for (int j = 0; j < cp.n; ++j) g(i, j) = cp.g(i, j), ric(i, j) = cp.ric(i, j);
    return fluid_decompose(g, ric, cluster_tol);
}

// ---------------------------------------------------------------------------

namespace {

Tensor<Jet<1>, 3> truncate1(const Tensor<Jet<2>, 3>& t)
{
    Tensor<Jet<1>, 3> r(t.dim());
    for (std::size_t s = 0; s < t.size(); ++s) r.data()[s] = t.data()[s].truncate<1>();
    return r;
}

/// u, nabla u and the metric at one point from first derivatives of g only.
struct Kinematics {
    int n = 0;
    Tensor<double, 2> g, ginv, du;
    std::vector<Jet<1>> u;
    std::vector<double> u_up;

    double uv(int j) const { return u[j].value(); }
};

Kinematics kinematics_at(const MetricChart& chart, const VectorField& field, std::span<const double> p)
{
    if (!field.differentiable()) throw NotDifferentiable("pointwise vector field cannot be differentiated");
    Kinematics k;
    k.n = chart.dim();
    const auto g1 = chart.metric_jets<1>(p);
    const auto ginv0 = invert(truncate<1, 0>(g1));
    const auto gamma = christoffel<0>(g1, ginv0);
    k.u = field.covariant_jets<1>(chart, p);
    k.du = values(covector_derivative<0>(k.u, gamma));
    k.g = values(g1);
    k.ginv = values(ginv0);
    k.u_up.assign(k.n, 0.0);
    for (int i = 0; i < k.n; ++i)
        for (int j = 0; j < k.n; ++j) k.u_up[i] += k.ginv(i, j) * k.uv(j);
    return k;
}

bool b_negligible(const FluidFields& ff)
{
    return std::abs(ff.B.value()) <= 1e-9 * (1.0 + std::abs(ff.A.value()));
}

}  // namespace

FluidFields fluid_fields_at(const MetricChart& chart, const CurvaturePoint& cp, const VectorField& u)
{
    if (!u.differentiable()) throw NotDifferentiable("pointwise vector field cannot be differentiated");
    const int n = cp.n;
    FluidFields ff;
    ff.n = n;
    ff.point = cp.point;
    ff.g = Tensor<double, 2>(n);
    ff.ginv = Tensor<double, 2>(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ff.g(i, j) = cp.g(i, j), ff.ginv(i, j) = cp.ginv(i, j);

    const auto u2 = u.covariant_jets<2>(chart, cp.point);
    ff.nabla_u = covector_derivative<1>(u2, truncate1(cp.christoffel));
    ff.u = truncate<1>(u2);
    const auto ginv1 = truncate<2, 1>(cp.inverse);
    ff.u_up = contract(ginv1, ff.u);

    Jet<1> ruu(n, 0.0), div(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ruu += cp.ricci(i, j) * ff.u_up[i] * ff.u_up[j];
            div += ginv1(i, j) * ff.nabla_u(i, j);
        }
    ff.R_uu = ruu;
    ff.A = (cp.scalar + ruu) / double(n - 1);
    ff.B = ruu + ff.A;
    ff.gamma = double(n - 2) * ff.A + ff.B;
    ff.f = div / double(n - 1);
    return ff;
}

ScalarFields scalar_fields_at(const MetricChart& chart, const VectorField& u, std::span<const double> p)
{
    const auto ff = fluid_fields_at(chart, curvature_at(chart, p), u);
    ScalarFields s;
    s.A = ff.A.value();
    s.B = ff.B.value();
    s.gamma = ff.gamma.value();
    for (int k = 0; k < ff.n; ++k) {
        s.grad_A.push_back(ff.A.d(k));
        s.grad_B.push_back(ff.B.d(k));
        s.grad_gamma.push_back(ff.gamma.d(k));
    }
    return s;
}

// ---------------------------------------------------------------------------

namespace {

Residual curl_of(const Tensor<double, 2>& du)
{
    double worst = 0.0;
    const int n = du.dim();
    for (int k = 0; k < n; ++k)
        for (int j = k + 1; j < n; ++j) worst = std::max(worst, std::abs(du(k, j) - du(j, k)));
    return Residual::of(worst, max_abs(du));
}

Residual acceleration_of(const Tensor<double, 2>& du, const std::vector<double>& u_up)
{
    const int n = du.dim();
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        double a = 0.0;
        for (int k = 0; k < n; ++k) a += u_up[k] * du(k, j);
        worst = std::max(worst, std::abs(a));
    }
    return Residual::of(worst, max_abs(du));
}

std::vector<double> up_values(const FluidFields& ff)
{
    std::vector<double> r(ff.n);
    for (int i = 0; i < ff.n; ++i) r[i] = ff.uu(i);
    return r;
}

}  // namespace

Residual closed_residual(const FluidFields& ff) { return curl_of(values(ff.nabla_u)); }

Residual check_closed(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points)
{
    Residual r;
    for (const auto& p : points) {
        const auto gv = grad_vector_at(chart, u, p);
        const auto du = values(gv.nabla);
        if (gv.curl_mismatch > 1e-10 * (1.0 + max_abs(du)))
            throw std::logic_error("covariant curl differs from the partial curl");
        r.merge(curl_of(du));
    }
    return r;
}

Residual geodesic_residual(const FluidFields& ff) { return acceleration_of(values(ff.nabla_u), up_values(ff)); }

Residual check_geodesic(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points)
{
    Residual r;
    for (const auto& p : points) {
        const auto k = kinematics_at(chart, u, p);
        r.merge(acceleration_of(k.du, k.u_up));
    }
    return r;
}

// ---------------------------------------------------------------------------

TorseFormingData torse_decompose(const Tensor<double, 2>& nabla_u, std::span<const double> u,
                                 const Tensor<double, 2>& g, const Tensor<double, 2>& ginv)
{
    const int n = g.dim();
    TorseFormingData t;
    double div = 0.0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) div += ginv(k, j) * nabla_u(k, j);
    t.f = div / (n - 1);
    t.omega.resize(n);
    for (int k = 0; k < n; ++k) t.omega[k] = t.f * u[k];
    double worst = 0.0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            worst = std::max(worst, std::abs(nabla_u(k, j) - t.f * (u[k] * u[j] + g(k, j))));
    t.residual = Residual::of(worst, max_abs(nabla_u));
    return t;
}

TorseFormingData torse_decompose(const FluidFields& ff)
{
    std::vector<double> u(ff.n);
    for (int i = 0; i < ff.n; ++i) u[i] = ff.uv(i);
    auto t = torse_decompose(values(ff.nabla_u), u, ff.g, ff.ginv);
    if (!b_negligible(ff)) {
        const double denom = 2.0 * ff.B.value() * (ff.n - 1);
        double flow = 0.0;
        for (int m = 0; m < ff.n; ++m) flow += ff.uu(m) * ff.gamma.d(m);
        t.f_gamma_gap = std::abs(t.f + flow / denom);
        double gap = 0.0;
        for (int k = 0; k < ff.n; ++k) gap = std::max(gap, std::abs(ff.gamma.d(k) / denom - t.omega[k]));
        t.omega_gamma_gap = gap;
    }
    return t;
}

Residual omega_curl_residual(const FluidFields& ff)
{
    std::vector<Jet<1>> omega;
    double scale = 0.0;
    for (int k = 0; k < ff.n; ++k) {
        omega.push_back(ff.f * ff.u[k]);
        scale = std::max(scale, omega.back().max_abs());
    }
    double worst = 0.0;
    for (int j = 0; j < ff.n; ++j)
        for (int k = j + 1; k < ff.n; ++k) worst = std::max(worst, std::abs(omega[k].d(j) - omega[j].d(k)));
    return Residual::of(worst, scale);
}

Residual concircular_check(const MetricChart& chart, const VectorField& omega, std::span<const ChartPoint> points)
{
    return check_closed(chart, omega, points);
}

// ---------------------------------------------------------------------------

namespace {

struct GaussRule {
    std::vector<double> x, w;  // on [-1, 1]
};

GaussRule gauss_legendre(int m)
{
    GaussRule r;
    r.x.resize(m);
    r.w.resize(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.x[i] = -x;
        r.x[m - 1 - i] = x;
        r.w[i] = r.w[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

double staircase(const CovectorFunction& w, std::span<const double> base, std::span<const double> p, bool ascending,
                 const GaussRule& rule, int panels)
{
    const int n = static_cast<int>(base.size());
    std::vector<double> cur(base.begin(), base.end());
    double total = 0.0;
    for (int s = 0; s < n; ++s) {
        const int i = ascending ? s : n - 1 - s;
        const double a = base[i], b = p[i];
        if (a == b) continue;
        const double h = (b - a) / panels;
        for (int k = 0; k < panels; ++k)
            for (std::size_t q = 0; q < rule.x.size(); ++q) {
                cur[i] = a + h * (k + 0.5 * (rule.x[q] + 1.0));
                total += 0.5 * h * rule.w[q] * w(cur)[i];
            }
        cur[i] = b;
    }
    return total;
}

}  // namespace

PotentialResult line_integral(const CovectorFunction& w, std::span<const double> base, std::span<const double> p,
                              const QuadratureOptions& opts)
{
    if (base.size() != p.size()) throw std::invalid_argument("basepoint and target dimensions differ");
    if (opts.order < 1 || opts.panels < 1) throw std::invalid_argument("quadrature order and panels must be positive");
    const auto rule = gauss_legendre(opts.order);
    const double coarse = staircase(w, base, p, true, rule, opts.panels);
    PotentialResult r;
    r.value = staircase(w, base, p, true, rule, 2 * opts.panels);
    r.convergence_gap = std::abs(r.value - coarse);
    r.path_defect = std::abs(r.value - staircase(w, base, p, false, rule, 2 * opts.panels));
    if (r.convergence_gap > opts.convergence_tol * (1.0 + std::abs(r.value)))
        throw QuadratureError("line integral did not converge: panel doubling changed the value by " +
                              std::to_string(r.convergence_gap));
    return r;
}

PotentialResult reconstruct_potential(const MetricChart& chart, const VectorField& w, std::span<const double> base,
                                      std::span<const double> p, double closed_tol, const QuadratureOptions& opts)
{
    for (auto q : {base, p}) {
        const auto curl = check_closed(chart, w, std::vector<ChartPoint>{ChartPoint(q.begin(), q.end())});
        if (curl.scaled > closed_tol)
            throw NotClosed("covector is not closed: curl " + std::to_string(curl.raw) + " exceeds tolerance");
    }
    const auto fn = [&chart, &w](std::span<const double> q) { return w.covariant_values(chart, q); };
    return line_integral(fn, base, p, opts);
}

CovectorFunction omega_function(const MetricChart& chart, const VectorField& u)
{
    return [chart, u](std::span<const double> q) {
        const auto k = kinematics_at(chart, u, q);
        std::vector<double> uv(k.n);
        for (int i = 0; i < k.n; ++i) uv[i] = k.uv(i);
        return torse_decompose(k.du, uv, k.g, k.ginv).omega;
    };
}

CovectorFunction velocity_function(const MetricChart& chart, const VectorField& u)
{
    return [chart, u](std::span<const double> q) { return u.covariant_values(chart, q); };
}

// ---------------------------------------------------------------------------

ConcircularData chen_at(const FluidFields& ff, double sigma, double tol)
{
    const int n = ff.n;
    const double e = std::exp(-sigma);
    const double f = ff.f.value();
    const double A = ff.A.value(), B = ff.B.value();

    ConcircularData c;
    c.sigma = sigma;
    c.rho = e * f;
    c.X.resize(n);
    c.grad_rho.resize(n);
    double xx = 0.0;
    for (int j = 0; j < n; ++j) {
        c.X[j] = e * ff.uv(j);
        xx += c.X[j] * e * ff.uu(j);
    }
    c.timelike_gap = std::abs(xx + e * e);

    double chen = 0.0, dx = 0.0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const double nabla_x = e * (ff.du(k, j) - f * ff.uv(k) * ff.uv(j));
            dx = std::max(dx, std::abs(nabla_x));
            chen = std::max(chen, std::abs(nabla_x - c.rho * ff.g(k, j)));
        }
    c.chen = Residual::of(chen, dx);

    const double coeff = (A - B) / (1.0 - n);
    double ckv = 0.0, scale = 0.0;
    for (int j = 0; j < n; ++j) {
        c.grad_rho[j] = e * (ff.f.d(j) - f * f * ff.uv(j));
        const double rhs = coeff * c.X[j];
        scale = std::max({scale, std::abs(c.grad_rho[j]), std::abs(rhs)});
        ckv = std::max(ckv, std::abs(c.grad_rho[j] - rhs));
    }
    c.ckv = Residual::of(ckv, scale);
    c.homothetic = std::abs(A - B) <= tol * (1.0 + std::abs(A) + std::abs(B));
    return c;
}

ChenReport chen_check(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points,
                      std::span<const double> basepoint, const QuadratureOptions& opts, double tol)
{
    ChenReport rep;
    const auto omega = omega_function(chart, u);
    for (const auto& p : points) {
        const auto sigma = line_integral(omega, basepoint, p, opts);
        auto c = chen_at(fluid_fields_at(chart, curvature_at(chart, p), u), sigma.value, tol);
        c.path_defect = sigma.path_defect;
        rep.chen.merge(c.chen);
        rep.ckv.merge(c.ckv);
        rep.path_defect = std::max(rep.path_defect, c.path_defect);
        rep.timelike_gap = std::max(rep.timelike_gap, c.timelike_gap);
        rep.points.push_back(std::move(c));
    }
    return rep;
}

// ---------------------------------------------------------------------------

WeylElectric weyl_electric_check(const CurvaturePoint& cp, std::span<const double> u_up)
{
    const int n = cp.n;
    double electric = 0.0, full = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                double s = 0.0;
                for (int m = 0; m < n; ++m) {
                    const double c = cp.weyl(j, k, l, m).value();
                    s += c * u_up[m];
                    full = std::max(full, std::abs(c));
                }
                electric = std::max(electric, std::abs(s));
            }
    const double scale = max_abs(cp.riemann_low);
    return {Residual::of(electric, scale), Residual::of(full, scale)};
}

// ---------------------------------------------------------------------------

const char* ladder_name(LadderIdentity id)
{
    switch (id) {
    case LadderIdentity::Divergence: return "ladder.divergence";
    case LadderIdentity::Curl: return "ladder.curl";
    case LadderIdentity::Transvected: return "ladder.transvected";
    case LadderIdentity::Bianchi: return "ladder.bianchi";
    case LadderIdentity::GammaFlow: return "ladder.gamma_flow";
    case LadderIdentity::BFlow: return "ladder.b_flow";
    case LadderIdentity::Acceleration: return "ladder.acceleration";
    case LadderIdentity::BuClosed: return "ladder.bu_closed";
    case LadderIdentity::GammaAligned: return "ladder.gamma_aligned";
    }
    return "?";
}

const char* ladder_anchor(LadderIdentity id)
{
    switch (id) {
    case LadderIdentity::Divergence: return "∇^m(B u_j u_m) = ½∇_j[(n−2)A − B]";
    case LadderIdentity::Curl:
        return "∇_k(B u_j u_l) − ∇_l(B u_j u_k) = −(g_{jl}∇_kγ − g_{jk}∇_lγ)/(2(n−1))";
    case LadderIdentity::Transvected:
        return "(∇_k + u_k u^l∇_l)B + B u^l∇_l u_k = (∇_k + u_k u^l∇_l)γ/(2(n−1))";
    case LadderIdentity::Bianchi: return "(∇_k + u_k u^i∇_i)B + B u^m∇_m u_k = ½(∇_k + u_k u^i∇_i)γ";
    case LadderIdentity::GammaFlow: return "(∇_j + u_j u^k∇_k)γ = 0";
    case LadderIdentity::BFlow: return "(∇_j + u_j u^k∇_k)B + B u^m∇_m u_j = 0";
    case LadderIdentity::Acceleration:
        return "B(∇_k + u_k u^m∇_m)u_j = (u_j∇_k − g_{jk}u^l∇_l)γ/(2(n−1))";
    case LadderIdentity::BuClosed: return "∇_k(B u_j) = ∇_j(B u_k)";
    case LadderIdentity::GammaAligned: return "u_j∇_kγ = u_k∇_jγ";
    }
    return "?";
}

LadderReport& LadderReport::merge(const LadderReport& o)
{
    for (int i = 0; i < kLadderSize; ++i) residuals[i].merge(o.residuals[i]);
    return *this;
}

double LadderReport::worst() const
{
    double w = 0.0;
    for (const auto& r : residuals) w = std::max(w, r.scaled);
    return w;
}

LadderReport ladder_at(const FluidFields& ff, const Jet<1>* B_shift)
{
    const int n = ff.n;
    const Jet<1> Bj = B_shift ? ff.B + *B_shift : ff.B;
    const Jet<1> Gj = double(n - 2) * ff.A + Bj;
    const double B = Bj.value();
    const double c = 1.0 / (2.0 * (n - 1));

    std::vector<double> gA(n), gB(n), gG(n), u(n), up(n), acc(n, 0.0);
    for (int k = 0; k < n; ++k) {
        gA[k] = ff.A.d(k);
        gB[k] = Bj.d(k);
        gG[k] = Gj.d(k);
        u[k] = ff.uv(k);
        up[k] = ff.uu(k);
    }
    const auto du = values(ff.nabla_u);
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) acc[k] += up[m] * du(m, k);
    const auto flow = [&](const std::vector<double>& grad) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += up[i] * grad[i];
        return s;
    };
    const double flowB = flow(gB), flowG = flow(gG);
    const auto proj = [&](const std::vector<double>& grad, double fl, int k) { return grad[k] + u[k] * fl; };
    // nabla_k (B u_j u_l)
    const auto N = [&](int k, int j, int l) { return gB[k] * u[j] * u[l] + B * (du(k, j) * u[l] + u[j] * du(k, l)); };

    const double scale = std::max({max_abs(gA), max_abs(gB), max_abs(gG), std::abs(B) * max_abs(du),
                                   std::abs(B) * max_abs(acc)});
    std::array<double, kLadderSize> worst{};
    const auto put = [&](LadderIdentity id, double v) {
        auto& w = worst[static_cast<int>(id)];
        w = std::max(w, std::abs(v));
    };

    for (int j = 0; j < n; ++j) {
        double div = 0.0;
        for (int m = 0; m < n; ++m)
            for (int k = 0; k < n; ++k) div += ff.ginv(m, k) * N(k, j, m);
        put(LadderIdentity::Divergence, div - 0.5 * ((n - 2) * gA[j] - gB[j]));

        const double pB = proj(gB, flowB, j), pG = proj(gG, flowG, j);
        put(LadderIdentity::Transvected, pB + B * acc[j] - c * pG);
        put(LadderIdentity::Bianchi, pB + B * acc[j] - 0.5 * pG);
        put(LadderIdentity::GammaFlow, pG);
        put(LadderIdentity::BFlow, pB + B * acc[j]);

        for (int k = 0; k < n; ++k) {
            put(LadderIdentity::Acceleration,
                B * (du(k, j) + u[k] * acc[j]) - c * (u[j] * gG[k] - ff.g(j, k) * flowG));
            put(LadderIdentity::BuClosed, gB[k] * u[j] + B * du(k, j) - gB[j] * u[k] - B * du(j, k));
            put(LadderIdentity::GammaAligned, u[j] * gG[k] - u[k] * gG[j]);
            for (int l = 0; l < n; ++l)
                put(LadderIdentity::Curl,
                    N(k, j, l) - N(l, j, k) + c * (ff.g(j, l) * gG[k] - ff.g(j, k) * gG[l]));
        }
    }
    LadderReport rep;
    for (int i = 0; i < kLadderSize; ++i) rep.residuals[i] = Residual::of(worst[i], scale);
    return rep;
}

LadderReport identity_ladder(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points,
                             const std::optional<std::string>& B_shift)
{
    std::optional<Expr> shift;
    if (B_shift) shift = chart.parse_expr(*B_shift);
    LadderReport rep;
    for (const auto& p : points) {
        const auto ff = fluid_fields_at(chart, curvature_at(chart, p), u);
        if (shift) {
            const auto s = eval_jet<1>(*shift, p, chart.parameter_values());
            rep.merge(ladder_at(ff, &s));
        } else {
            rep.merge(ladder_at(ff));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

SolitonReport soliton_at(const FluidFields& ff, const CurvaturePoint& cp)
{
    SolitonReport s;
    s.lambda = ff.A.value() + ff.f.value();
    s.eta = ff.B.value() + ff.f.value();
    double worst = 0.0;
    for (int i = 0; i < ff.n; ++i)
        for (int j = 0; j < ff.n; ++j)
            worst = std::max(worst, std::abs(cp.ric(i, j) + ff.du(i, j) - s.eta * ff.uv(i) * ff.uv(j) -
                                             s.lambda * ff.g(i, j)));
    s.residual = Residual::of(worst, max_abs(cp.ricci));
    return s;
}

SolitonSummary soliton_form_check(const MetricChart& chart, const VectorField& u, std::span<const ChartPoint> points,
                                  std::span<const double> basepoint, double tol, const QuadratureOptions& opts)
{
    SolitonSummary out;
    const auto velocity = velocity_function(chart, u);
    bool first = true;
    for (const auto& p : points) {
        const auto cp = curvature_at(chart, p);
        const auto ff = fluid_fields_at(chart, cp, u);
        const auto s = soliton_at(ff, cp);
        const auto theta = line_integral(velocity, basepoint, p, opts);
        out.theta.push_back(theta.value);
        out.theta_path_defect = std::max(out.theta_path_defect, theta.path_defect);
        out.residual.merge(s.residual);
        out.lambda_min = first ? s.lambda : std::min(out.lambda_min, s.lambda);
        out.lambda_max = first ? s.lambda : std::max(out.lambda_max, s.lambda);
        out.eta_max_abs = std::max(out.eta_max_abs, std::abs(s.eta));
        first = false;
    }
    const double lscale = 1.0 + std::max(std::abs(out.lambda_min), std::abs(out.lambda_max));
    out.gradient_ricci_soliton = out.lambda_max - out.lambda_min <= tol * lscale && out.eta_max_abs <= tol;
    return out;
}

}  // namespace grwcert
