#include "kramers/integrator.hpp"
#include "kramers/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace kramers {

std::string to_string(Scheme s)
{
    return s == Scheme::rk4_full ? "rk4_full" : "strang_exactB_rk4A";
}

Scheme scheme_from_string(const std::string& s)
{
    if (s == "rk4_full") return Scheme::rk4_full;
    if (s == "strang_exactB_rk4A" || s == "strang") return Scheme::strang_exactB_rk4A;
    throw ConfigError("unknown scheme '" + s + "'");
}

StableDt stable_dt(const OperatorContext& ctx)
{
    const Grid& g = *ctx.grid;
    const double inf = std::numeric_limits<double>::infinity();
    double max_dHdp = 0.0, max_dV = 0.0, max_H = 0.0;
    for (double v : ctx.dHdp) max_dHdp = std::max(max_dHdp, std::abs(v));
    for (double v : ctx.dVdx) max_dV = std::max(max_dV, std::abs(v));
    for (int i = 0; i < g.Nx(); ++i)
        for (int j = 0; j < g.Np(); ++j) max_H = std::max(max_H, std::abs(ctx.phase_energy(i, j)));

    // RK4 covers |lambda dt| <= 2 sqrt(2) on the imaginary axis; spectral d/dx reaches pi/hx.
    const double rk4_axis = 2.0 * std::sqrt(2.0);
    StableDt r;
    r.transport = max_dHdp > 0 ? rk4_axis / std::numbers::pi * g.hx() / max_dHdp : inf;
    r.force = max_dV > 0 ? rk4_axis * g.hp() / (max_dV * ctx.d1.symbol_max()) : inf;
    const double eps = 1e-300;
    r.diffusion = g.hp() * g.hp() / (2.0 * ctx.params.gamma * ctx.theta() + eps) * (4.0 / ctx.d2.symbol_max());
    r.phase = max_H > 0 ? 0.1 * g.hbar() / max_H : inf;

    r.dt = r.transport;
    r.binding = "transport";
    if (r.force < r.dt) { r.dt = r.force; r.binding = "force"; }
    if (r.diffusion < r.dt) { r.dt = r.diffusion; r.binding = "diffusion"; }
    if (r.phase < r.dt) { r.dt = r.phase; r.binding = "phase"; }
    return r;
}

OUPropagator::OUPropagator(const Params& params, GridPtr grid, double tau) : grid_(std::move(grid))
{
    if (!(tau >= 0)) throw ValidationError("OUPropagator: tau must be nonnegative");
    const Grid& g = *grid_;
    const double gt = params.gamma * tau;
    if (gt == 0.0) {
        identity_ = true;
        return;
    }
    const int Np = g.Np(), Nx = g.Nx();
    if (Np % 2 != 0) throw ValidationError("exact B propagator needs an even Np");
    const double a = std::exp(-gt);
    const double theta = params.kTm();
    const double hp = g.hp();
    const double p0 = g.p()[0];
    const double dk = 2.0 * std::numbers::pi / (Np * hp);
    const double alpha = 2.0 * std::numbers::pi * a / Np;
    const int half = Np / 2;
    L_ = 2 * Np;

    pre_.resize(Np);
    for (int j = 0; j < Np; ++j) pre_[j] = std::polar(1.0, -0.5 * alpha * double(j) * j);

    std::vector<cplx> w(L_, 0.0);
    for (int d = -(Np - 1); d <= Np - 1; ++d) {
        const double u = d - half;
        w[(d + L_) % L_] = std::polar(1.0, 0.5 * alpha * u * u);
    }
    kernel_.resize(L_);
    fft::forward(L_, w.data(), kernel_.data());
    for (auto& z : kernel_) z /= static_cast<double>(L_);

    // F_new(k_m) = F(a k_m) exp(-i k_m s (1-a)) exp(-theta (1-a^2) k_m^2 / 2)
    // F(a k_m) = hp exp(-i a k_m p0) exp(-i alpha m^2/2) conv[m']
    // the inverse sum needs exp(i k_m p0) before a backward DFT and (-1)^j/(Np hp) after
    const double var = theta * (1.0 - a * a);
    mult_.resize(static_cast<std::size_t>(Nx) * Np);
    for (int n = 0; n < Nx; ++n) {
        const double s = g.s()[n];
        for (int mp = 0; mp < Np; ++mp) {
            const double m = mp - half;
            const double k = m * dk;
            const double phase = -a * k * p0 - 0.5 * alpha * m * m - k * s * (1.0 - a) + k * p0;
            const double mag = hp * std::exp(-0.5 * var * k * k) / (Np * hp);
            mult_[static_cast<std::size_t>(n) * Np + mp] = std::polar(mag, phase);
        }
    }
}

void OUPropagator::apply(SpectralField& ft) const
{
    if (identity_) return;
    require_same_grid(ft.grid, grid_, "OUPropagator");
    const Grid& g = *grid_;
    const int Np = g.Np(), Nx = g.Nx();
    std::vector<cplx> buf(static_cast<std::size_t>(Nx) * L_, 0.0);
    for (int n = 0; n < Nx; ++n) {
        const cplx* src = ft.values.data() + static_cast<std::size_t>(n) * Np;
        cplx* dst = buf.data() + static_cast<std::size_t>(n) * L_;
        for (int j = 0; j < Np; ++j) dst[j] = src[j] * pre_[j];
    }
    fft::many(L_, Nx, 1, L_, fft::Direction::forward, buf.data(), buf.data());
    for (int n = 0; n < Nx; ++n) {
        cplx* row = buf.data() + static_cast<std::size_t>(n) * L_;
        for (int k = 0; k < L_; ++k) row[k] *= kernel_[k];
    }
    fft::many(L_, Nx, 1, L_, fft::Direction::backward, buf.data(), buf.data());
    for (int n = 0; n < Nx; ++n) {
        const cplx* src = buf.data() + static_cast<std::size_t>(n) * L_;
        const cplx* mul = mult_.data() + static_cast<std::size_t>(n) * Np;
        cplx* dst = ft.values.data() + static_cast<std::size_t>(n) * Np;
        for (int m = 0; m < Np; ++m) dst[m] = src[m] * mul[m];
    }
    fft::many(Np, Nx, 1, Np, fft::Direction::backward, ft.values.data(), ft.values.data());
    for (int n = 0; n < Nx; ++n) {
        cplx* col = ft.values.data() + static_cast<std::size_t>(n) * Np;
        for (int j = 1; j < Np; j += 2) col[j] = -col[j];
    }
}

WaveField OUPropagator::apply(const WaveField& phi) const
{
    if (identity_) return phi;
    SpectralField ft = x_fourier(phi);
    apply(ft);
    return x_fourier_inverse(ft);
}

WaveField exact_b_propagator(const WaveField& phi, const OperatorContext& ctx, double dt)
{
    require_same_grid(phi.grid, ctx.grid, "exact_b_propagator");
    WaveField out = OUPropagator(ctx.params, ctx.grid, dt).apply(phi);
    out.t = phi.t + dt;
    return out;
}

int plan_steps(const StepPlan& plan)
{
    if (!(plan.dt > 0) || !std::isfinite(plan.dt)) throw ValidationError("plan.dt must be positive");
    if (!(plan.t_end >= 0) || !std::isfinite(plan.t_end)) throw ValidationError("plan.t_end must be nonnegative");
    if (plan.snapshot_stride < 0) throw ValidationError("plan.snapshot_stride must be nonnegative");
    const double r = plan.t_end / plan.dt;
    const double n = std::round(r);
    if (std::abs(r - n) > 1e-9 * std::max(1.0, r))
        throw ValidationError("plan.t_end must be an integer multiple of plan.dt");
    if (n > 1e9) throw ValidationError("plan has too many steps");
    return static_cast<int>(n);
}

Trajectory evolve(const WaveField& phi0, const OperatorContext& ctx, const StepPlan& plan,
                  const std::vector<Observer>& observers, Diagnostics* diag, const EvolveOptions& opts)
{
    require_same_grid(phi0.grid, ctx.grid, "evolve");
    const int steps = plan_steps(plan);
    if (plan.scheme == Scheme::rk4_full && !plan.allow_unstable) {
        const auto sd = stable_dt(ctx);
        if (plan.dt > sd.dt)
            throw ValidationError("dt=" + std::to_string(plan.dt) + " exceeds stable_dt=" + std::to_string(sd.dt) +
                                  " (" + sd.binding + " bound) for rk4_full");
    }
    if (plan.scheme == Scheme::strang_exactB_rk4A && !plan.allow_unstable) {
        const auto sd = stable_dt(ctx);
        const double bound = std::min(sd.transport, sd.force);
        if (plan.dt > bound)
            throw ValidationError("dt=" + std::to_string(plan.dt) + " exceeds the RK4 bound " + std::to_string(bound) +
                                  " of the A part (" + (sd.force < sd.transport ? "force" : "transport") + ")");
    }
    check_p_boundary(phi0, ctx, diag, "evolve(initial)");

    Trajectory traj;
    const double t0 = phi0.t;
    const double norm0 = l2_norm(phi0);
    WaveField cur = phi0;

    auto record = [&](const WaveField& f) {
        const double nrm = l2_norm(f);
        traj.norm.push(f.t, nrm);
        traj.boundary.push(f.t, p_boundary_ratio(f));
        traj.snapshot_times.push_back(f.t);
        if (opts.keep_snapshots) traj.snapshots.push_back(f);
        for (const auto& obs : observers) obs(f.t, f);
    };
    auto is_snapshot = [&](int k) {
        return k == steps || (plan.snapshot_stride > 0 && k % plan.snapshot_stride == 0);
    };

    record(cur);

    auto rhs_a = [&ctx](const WaveField& f) { return apply_A(f, ctx); };
    auto rhs_full = [&ctx](const WaveField& f) { return rhs_modified_kk(f, ctx); };

    std::unique_ptr<OUPropagator> half, full;
    if (plan.scheme == Scheme::strang_exactB_rk4A) {
        half = std::make_unique<OUPropagator>(ctx.params, ctx.grid, 0.5 * plan.dt);
        full = std::make_unique<OUPropagator>(ctx.params, ctx.grid, plan.dt);
    }

    bool pending_half = true;  // Strang: the leading half B step is still owed
    WaveField last_good = cur;
    try {
        for (int k = 1; k <= steps; ++k) {
            const double t_next = t0 + k * plan.dt;
            if (plan.scheme == Scheme::rk4_full) {
                cur = step_rk4(cur, rhs_full, plan.dt);
            } else {
                if (pending_half) cur = half->apply(cur);
                cur = step_rk4(cur, rhs_a, plan.dt);
                // consecutive half steps merge into one full step unless a snapshot is due
                if (is_snapshot(k)) {
                    cur = half->apply(cur);
                    pending_half = true;
                } else {
                    cur = full->apply(cur);
                    pending_half = false;
                }
            }
            cur.t = t_next;
            traj.steps_taken = k;

            if (is_snapshot(k) || k % 16 == 0) {
                const double nrm = l2_norm(cur);
                if (!std::isfinite(nrm) || nrm > opts.divergence_factor * std::max(norm0, 1e-300)) {
                    throw DivergenceError("norm grew beyond " + std::to_string(opts.divergence_factor) +
                                          "x the initial norm at t=" + std::to_string(t_next));
                }
            }
            if (is_snapshot(k)) {
                record(cur);
                last_good = cur;
            }
        }
    } catch (const DivergenceError& e) {
        traj.aborted = true;
        traj.abort_reason = e.what();
        warn(diag, std::string("evolve aborted: ") + e.what());
        traj.final_state = last_good;
        return traj;
    }
    traj.final_state = cur;
    check_p_boundary(cur, ctx, diag, "evolve(final)");
    return traj;
}

} // namespace kramers
