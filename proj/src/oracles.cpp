#include "kramers/oracles.hpp"
#include "kramers/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace kramers {

double proper_time(double t, double x, double v, const Params& params)
{
    const double c = params.c;
    if (!std::isfinite(v) || std::abs(v) >= c) throw DomainError("proper_time: |v| must be below c");
    const double beta = v / c;
    return (t - x * v / (c * c)) / std::sqrt((1.0 - beta) * (1.0 + beta));
}

double proper_time_from_momentum(double t, double x, double p, const Params& params, std::optional<double> potential_at_x)
{
    const double mc = params.m * params.c;
    double E = params.c * std::sqrt(mc * mc + p * p);
    if (potential_at_x) E += *potential_at_x;
    return (E * t - x * p) / params.rest_energy();
}

double velocity_from_momentum(double p, const Params& params)
{
    const double mc = params.m * params.c;
    return params.c * p / std::sqrt(mc * mc + p * p);
}

WaveField free_phase(const WaveField& phi0, const OperatorContext& ctx, double t)
{
    if (!is_free(ctx.pot)) throw ContractError("free_phase requires the free potential");
    if (ctx.params.gamma != 0.0) throw ContractError("free_phase requires gamma = 0");
    if (ctx.mode != HamiltonianMode::quadratic) throw ContractError("free_phase requires quadratic mode");
    require_same_grid(phi0.grid, ctx.grid, "free_phase");
    const Grid& g = *ctx.grid;
    const int Nx = g.Nx(), Np = g.Np();
    WaveField out{phi0.grid, phi0.values, phi0.t + t};
    if (t == 0.0) return out;

    fft::many(Nx, Np, Np, 1, fft::Direction::forward, out.values.data(), out.values.data());
    const double k0 = 2.0 * std::numbers::pi / g.Lx();
    const double m = ctx.params.m, hbar = g.hbar();
    const double rest = ctx.params.remove_rest_energy ? 0.0 : ctx.params.rest_energy();
    for (int k = 0; k < Nx; ++k) {
        const int n = k < Nx / 2 ? k : k - Nx;
        for (int j = 0; j < Np; ++j) {
            const double p = g.p()[j];
            const double shift = p / m * t;
            const double phase = -k0 * n * shift + (p * p / (2.0 * m) - rest) * t / hbar;
            out.values[g.index(k, j)] *= std::polar(1.0 / Nx, phase);
        }
    }
    fft::many(Nx, Np, Np, 1, fft::Direction::backward, out.values.data(), out.values.data());
    return out;
}

SchrodingerOptions schrodinger_options_for(const Params& params)
{
    return SchrodingerOptions{!params.remove_rest_energy, true};
}

double schrodinger_energy_shift(const Params& params, const SchrodingerOptions& opts)
{
    double e = 0.0;
    if (opts.include_rest_energy) e += params.rest_energy();
    if (opts.include_thermal_shift) e -= 0.5 * params.d * params.k_B * params.T;
    return e;
}

PsiField schrodinger_rhs(const PsiField& psi, const Params& params, const PotentialSpec& pot, const SchrodingerOptions& opts)
{
    const Grid& g = *psi.grid;
    const int Nx = g.Nx();
    std::vector<cplx> lap(Nx);
    fft::forward(Nx, psi.values.data(), lap.data());
    const double k0 = 2.0 * std::numbers::pi / g.Lx();
    for (int k = 0; k < Nx; ++k) {
        const int n = k < Nx / 2 ? k : k - Nx;
        lap[k] *= -(k0 * n) * (k0 * n) / Nx;
    }
    fft::backward(Nx, lap.data(), lap.data());
    const double hbar = params.hbar;
    const double shift = schrodinger_energy_shift(params, opts);
    PsiField out = zeros_psi(psi.grid, psi.t);
    for (int i = 0; i < Nx; ++i) {
        const cplx h = -hbar * hbar / (2.0 * params.m) * lap[i] + (eval_potential(pot, g.x()[i]) + shift) * psi.values[i];
        out.values[i] = cplx(0.0, -1.0 / hbar) * h;
    }
    return out;
}

PsiField schrodinger_evolve(const PsiField& psi0, const Params& params, const PotentialSpec& pot, double t_end, double dt,
                            const SchrodingerOptions& opts, Diagnostics* diag)
{
    if (!(dt > 0)) throw ValidationError("schrodinger_evolve: dt must be positive");
    if (!(t_end >= 0)) throw ValidationError("schrodinger_evolve: t_end must be nonnegative");
    const Grid& g = *psi0.grid;
    const int Nx = g.Nx();
    const double hbar = params.hbar;
    const int steps = std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9)));
    const double h = t_end / steps;

    double vmax = 0.0;
    std::vector<cplx> half_v(Nx), kin(Nx);
    for (int i = 0; i < Nx; ++i) {
        const double V = eval_potential(pot, g.x()[i]);
        vmax = std::max(vmax, std::abs(V));
        half_v[i] = std::polar(1.0, -0.5 * V * h / hbar);
    }
    const double k0 = 2.0 * std::numbers::pi / g.Lx();
    for (int k = 0; k < Nx; ++k) {
        const int n = k < Nx / 2 ? k : k - Nx;
        const double kk = k0 * n;
        kin[k] = std::polar(1.0 / Nx, -hbar * kk * kk / (2.0 * params.m) * h);
    }
    if (vmax * h / hbar > 0.2)
        warn(diag, "schrodinger_evolve: dt*max|V|/hbar = " + std::to_string(vmax * h / hbar) + " is large");

    std::vector<cplx> psi = psi0.values;
    if (t_end > 0) {
        for (int s = 0; s < steps; ++s) {
            for (int i = 0; i < Nx; ++i) psi[i] *= half_v[i];
            fft::forward(Nx, psi.data(), psi.data());
            for (int k = 0; k < Nx; ++k) psi[k] *= kin[k];
            fft::backward(Nx, psi.data(), psi.data());
            for (int i = 0; i < Nx; ++i) psi[i] *= half_v[i];
        }
        const cplx glob = std::polar(1.0, -schrodinger_energy_shift(params, opts) * t_end / hbar);
        for (auto& z : psi) z *= glob;
    }
    return PsiField{psi0.grid, std::move(psi), psi0.t + t_end};
}

namespace {

// Lagrange weights for nodes base..base+n-1 at fractional coordinate u (grid units)
void lagrange_weights(int n, int base, double u, double* w)
{
    for (int a = 0; a < n; ++a) {
        double v = 1.0;
        for (int b = 0; b < n; ++b)
            if (b != a) v *= (u - (base + b)) / double(a - b);
        w[a] = v;
    }
}

} // namespace

DensityField liouville_transport(const DensityField& rho0, const OperatorContext& ctx, double t, Diagnostics* diag,
                                 const LiouvilleOptions& opts)
{
    if (ctx.mode != HamiltonianMode::quadratic) throw ContractError("liouville_transport requires quadratic mode");
    require_same_grid(rho0.grid, ctx.grid, "liouville_transport");
    if (opts.interp_points != 4 && opts.interp_points != 6)
        throw ValidationError("liouville_transport: interp_points must be 4 or 6");
    const Grid& g = *ctx.grid;
    DensityField out{rho0.grid, rho0.values, rho0.t + t};
    if (t == 0.0) return out;

    const int Nx = g.Nx(), Np = g.Np();
    const int np = opts.interp_points;
    const int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(t) / opts.substep)));
    const double h = -t / nsub;
    const double m = ctx.params.m;

    double peak = 0.0, edge = 0.0;
    for (int i = 0; i < Nx; ++i) {
        for (int j = 0; j < Np; ++j) peak = std::max(peak, std::abs(rho0.values[g.index(i, j)]));
        edge = std::max({edge, std::abs(rho0.values[g.index(i, 0)]), std::abs(rho0.values[g.index(i, Np - 1)])});
    }
    const bool edge_loaded = peak > 0 && edge > opts.leak_tol * peak;
    long leaks = 0;

    std::vector<double> wx(np), wp(np);
    for (int i = 0; i < Nx; ++i) {
        for (int j = 0; j < Np; ++j) {
            double x = g.x()[i], p = g.p()[j];
            for (int s = 0; s < nsub; ++s) {
                p -= 0.5 * h * eval_potential_gradient(ctx.pot, x);
                x += h * p / m;
                p -= 0.5 * h * eval_potential_gradient(ctx.pot, x);
            }
            const double u = (x - g.spec().x_min) / g.hx();
            const double v = (p - g.p()[0]) / g.hp();
            if (v < -0.5 || v > Np - 0.5) {
                out.values[g.index(i, j)] = 0.0;
                ++leaks;
                continue;
            }
            const int bx = static_cast<int>(std::floor(u)) - (np / 2 - 1);
            int bp = static_cast<int>(std::floor(v)) - (np / 2 - 1);
            bp = std::clamp(bp, 0, Np - np);
            lagrange_weights(np, bx, u, wx.data());
            lagrange_weights(np, bp, v, wp.data());
            double acc = 0.0;
            for (int a = 0; a < np; ++a) {
                const int ix = ((bx + a) % Nx + Nx) % Nx;
                const double* row = rho0.values.data() + g.index(ix, 0);
                double r = 0.0;
                for (int b = 0; b < np; ++b) r += wp[b] * row[bp + b];
                acc += wx[a] * r;
            }
            out.values[g.index(i, j)] = acc;
        }
    }
    if (leaks > 0 && edge_loaded)
        warn(diag, "liouville_transport: " + std::to_string(leaks) +
                       " characteristics left the p-domain where rho0 is non-negligible");
    return out;
}

double hermite_he(int n, double x)
{
    if (n < 0) throw ValidationError("hermite_he: n must be nonnegative");
    double h0 = 1.0, h1 = x;
    if (n == 0) return h0;
    for (int k = 1; k < n; ++k) {
        const double h2 = x * h1 - k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

OUMode ou_mode(int n, double s, const Params& params, const Grid& grid)
{
    if (n < 0) throw ValidationError("ou_mode: n must be nonnegative");
    if (!(params.T > 0)) throw DomainError("ou_mode requires T > 0");
    const double theta = params.kTm();
    const double w = std::sqrt(theta);
    OUMode mode;
    mode.n = n;
    mode.s = s;
    mode.eigenvalue = -static_cast<double>(n);
    mode.values.resize(grid.Np());
    for (int j = 0; j < grid.Np(); ++j) {
        const double q = grid.p()[j] - s;
        mode.values[j] = hermite_he(n, q / w) * std::exp(-q * q / (2.0 * theta));
    }
    return mode;
}

WaveField embed_ou_mode(const OUMode& mode, GridPtr grid)
{
    const Grid& g = *grid;
    const double r = mode.s / g.ds();
    if (std::abs(r - std::round(r)) > 1e-9 || std::abs(std::round(r)) >= g.Nx() / 2)
        throw ValidationError("embed_ou_mode: s is not a resolved grid wavenumber");
    if (static_cast<int>(mode.values.size()) != g.Np()) throw ShapeError("embed_ou_mode: profile size mismatch");
    WaveField out = zeros_wave(grid);
    for (int i = 0; i < g.Nx(); ++i) {
        const cplx e = std::polar(1.0, mode.s * g.x()[i] / g.hbar());
        for (int j = 0; j < g.Np(); ++j) out.values[g.index(i, j)] = e * mode.values[j];
    }
    return out;
}

} // namespace kramers
