#include "kramers/analysis.hpp"
#include "kramers/oracles.hpp"
#include "kramers/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace kramers {

namespace {

template <class V>
double error_impl(const V& a, const V& b, NormKind norm, double weight)
{
    if (a.size() != b.size()) throw ShapeError("field_error: size mismatch");
    double sum = 0.0, sumb = 0.0, mx = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = std::abs(a[k] - b[k]);
        sum += d * d;
        sumb += std::abs(b[k]) * std::abs(b[k]);
        mx = std::max(mx, d);
    }
    switch (norm) {
    case NormKind::L2: return std::sqrt(sum * weight);
    case NormKind::Linf: return mx;
    case NormKind::relative_L2:
        if (sumb == 0.0) throw DomainError("field_error: relative norm against a zero field");
        return std::sqrt(sum / sumb);
    }
    return 0.0;
}

struct LineFit {
    double slope, intercept, rms;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw DomainError("least squares: abscissae are all equal");
    const double slope = sxy / sxx;
    const double icpt = my - slope * mx;
    double r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (icpt + slope * x[i]);
        r += e * e;
    }
    return {slope, icpt, std::sqrt(r / n)};
}

} // namespace

double field_error(const WaveField& a, const WaveField& b, NormKind norm)
{
    require_same_grid(a.grid, b.grid, "field_error");
    return error_impl(a.values, b.values, norm, a.grid->hx() * a.grid->hp());
}

double field_error(const DensityField& a, const DensityField& b, NormKind norm)
{
    require_same_grid(a.grid, b.grid, "field_error");
    return error_impl(a.values, b.values, norm, a.grid->hx() * a.grid->hp());
}

double field_error(const PsiField& a, const PsiField& b, NormKind norm)
{
    require_same_grid(a.grid, b.grid, "field_error");
    return error_impl(a.values, b.values, norm, a.grid->hx());
}

DecayFit fit_decay_rate(const MetricSeries& series, std::optional<std::pair<double, double>> window)
{
    const auto& t = series.times;
    const auto& v = series.values;
    if (t.size() != v.size()) throw ValidationError("fit_decay_rate: series lengths differ");
    std::size_t first = 0, last = t.size();
    if (window) {
        while (first < t.size() && t[first] < window->first) ++first;
        last = first;
        while (last < t.size() && t[last] <= window->second) ++last;
    } else {
        double floor = std::numeric_limits<double>::infinity();
        for (double x : v)
            if (x > 0) floor = std::min(floor, x);
        std::size_t k = 0;
        while (k < v.size() && v[k] > 100.0 * floor) ++k;
        if (k >= 3) last = k;
    }
    if (last - first < 2) throw DomainError("fit_decay_rate: fewer than two points in the window");
    std::vector<double> xs, ys;
    for (std::size_t k = first; k < last; ++k) {
        if (!(v[k] > 0)) throw DomainError("fit_decay_rate: nonpositive value in the fit window");
        xs.push_back(t[k]);
        ys.push_back(std::log(v[k]));
    }
    const auto fit = least_squares(xs, ys);
    return DecayFit{-fit.slope, fit.rms, first, last};
}

double convergence_order(const std::vector<double>& errors, const std::vector<double>& spacings)
{
    if (errors.size() != spacings.size()) throw ValidationError("convergence_order: length mismatch");
    if (errors.size() < 3) throw PreconditionError("convergence_order needs at least 3 refinement levels");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 0)) throw DomainError("convergence_order: order undefined for zero error");
        if (!(spacings[i] > 0)) throw ValidationError("convergence_order: spacings must be positive");
        lx.push_back(std::log(spacings[i]));
        ly.push_back(std::log(errors[i]));
    }
    return least_squares(lx, ly).slope;
}

ScalingReport fit_scaling(std::vector<double> abscissae, std::vector<double> errors, std::vector<bool> valid)
{
    ScalingReport r;
    r.abscissae = std::move(abscissae);
    r.errors = std::move(errors);
    r.valid = std::move(valid);
    std::vector<double> lx, ly;
    int prev = -1;
    for (std::size_t i = 0; i < r.errors.size(); ++i) {
        if (!r.valid[i] || !(r.errors[i] > 0)) continue;
        lx.push_back(std::log(r.abscissae[i]));
        ly.push_back(std::log(r.errors[i]));
        if (prev >= 0) r.pair_ratios.push_back(r.errors[i] / r.errors[prev]);
        prev = static_cast<int>(i);
    }
    if (lx.size() < 2) {
        r.exponent = std::numeric_limits<double>::quiet_NaN();
        r.residual = std::numeric_limits<double>::quiet_NaN();
        r.notes.push_back("fewer than two valid points; exponent undefined");
        return r;
    }
    const auto fit = least_squares(lx, ly);
    r.exponent = fit.slope;
    r.residual = fit.rms;
    return r;
}

PsiField gaussian_psi(GridPtr grid, double center, double width, double momentum)
{
    if (!(width > 0)) throw ValidationError("gaussian width must be positive");
    PsiField psi = zeros_psi(grid);
    const Grid& g = *grid;
    const double norm = std::pow(2.0 * std::numbers::pi * width * width, -0.25);
    for (int i = 0; i < g.Nx(); ++i) {
        // nearest periodic image of x - center
        double u = g.x()[i] - center;
        u -= g.Lx() * std::round(u / g.Lx());
        psi.values[i] = std::polar(norm * std::exp(-u * u / (4.0 * width * width)), momentum * u / g.hbar());
    }
    return psi;
}

SlowDynamicsRun slow_dynamics_error(const SlowDynamicsScenario& sc, double gamma_units, double t_check, Diagnostics* diag)
{
    SlowDynamicsRun run;
    run.gamma = gamma_units * sc.frequency;
    try {
        const Params params = with_gamma(sc.params, run.gamma);
        auto grid = make_grid(sc.grid, params.hbar);
        OperatorContext ctx(params, sc.pot, HamiltonianMode::quadratic, grid, sc.p_order);
        ProjectionContext pctx(params, grid, diag);
        const PsiField psi0 = gaussian_psi(grid, sc.psi_center, sc.psi_width, sc.psi_momentum);
        const WaveField phi0 = embed_psi(psi0, pctx);
        StepPlan plan{Scheme::strang_exactB_rk4A, sc.dt, t_check, 0, false};
        const auto traj = evolve(phi0, ctx, plan, {}, diag);
        if (traj.aborted) {
            run.note = traj.abort_reason;
            return run;
        }
        const PsiField psi = extract_psi(traj.final_state, pctx);
        const PsiField ref =
            schrodinger_evolve(psi0, params, sc.pot, t_check, sc.reference_dt, schrodinger_options_for(params), diag);
        run.error = field_error(psi, ref, NormKind::relative_L2);
        run.psi_norm = l2_norm(psi);
        run.reference_norm = l2_norm(ref);
        run.valid = std::isfinite(run.error);
        if (!run.valid) run.note = "non-finite error";
    } catch (const DivergenceError& e) {
        run.note = e.what();
    }
    return run;
}

ScalingReport gamma_scaling_study(const SlowDynamicsScenario& sc, const std::vector<double>& gammas, double t_check,
                                  Diagnostics* diag)
{
    if (gammas.size() < 3) throw PreconditionError("gamma scaling study needs at least 3 gamma values");
    for (double g : gammas)
        if (!(g > 0)) throw PreconditionError("gamma values must be positive");
    const double q = gammas[1] / gammas[0];
    for (std::size_t i = 1; i < gammas.size(); ++i)
        if (std::abs(gammas[i] / gammas[i - 1] - q) > 1e-9 * q || q == 1.0)
            throw PreconditionError("gamma values must form a geometric progression");
    if (sc.params.T <= 0) throw PreconditionError("gamma scaling study needs T > 0");

    std::vector<double> abs, errs;
    std::vector<bool> valid;
    std::vector<std::string> notes;
    for (double g : gammas) {
        const auto run = slow_dynamics_error(sc, g, t_check, diag);
        abs.push_back(run.gamma);
        errs.push_back(run.error);
        valid.push_back(run.valid);
        if (!run.valid) notes.push_back("gamma=" + std::to_string(run.gamma) + " invalid: " + run.note);
    }
    auto rep = fit_scaling(abs, errs, valid);
    rep.notes.insert(rep.notes.end(), notes.begin(), notes.end());
    return rep;
}

} // namespace kramers
