#include "kramers/operators.hpp"

#include <cmath>
#include <string>

namespace kramers {

namespace {

void apply_p_stencil(const PStencil& st, const Grid& g, const cplx* in, cplx* out)
{
    const int Np = g.Np();
    for (int i = 0; i < g.Nx(); ++i) st.apply(in + static_cast<std::size_t>(i) * Np, out + static_cast<std::size_t>(i) * Np);
}

void apply_p_stencil(const PStencil& st, const Grid& g, const double* in, double* out)
{
    const int Np = g.Np();
    for (int i = 0; i < g.Nx(); ++i) st.apply(in + static_cast<std::size_t>(i) * Np, out + static_cast<std::size_t>(i) * Np);
}

void check_grid(const WaveField& phi, const OperatorContext& ctx, const char* what)
{
    require_same_grid(phi.grid, ctx.grid, what);
    if (phi.values.size() != ctx.grid->size()) throw ShapeError(std::string(what) + ": size mismatch");
}

void check_grid(const DensityField& f, const OperatorContext& ctx, const char* what)
{
    require_same_grid(f.grid, ctx.grid, what);
    if (f.values.size() != ctx.grid->size()) throw ShapeError(std::string(what) + ": size mismatch");
}

std::vector<double> spectral_dx_real(const Grid& g, const std::vector<double>& v)
{
    std::vector<cplx> tmp(v.begin(), v.end());
    spectral_dx_inplace(g, tmp);
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = tmp[k].real();
    return out;
}

} // namespace

OperatorContext::OperatorContext(const Params& params_, PotentialSpec pot_, HamiltonianMode mode_, GridPtr grid_,
                                 int p_order_, double boundary_tol_)
    : params(params_),
      pot(std::move(pot_)),
      mode(mode_),
      grid(std::move(grid_)),
      p_order(p_order_),
      boundary_tol(boundary_tol_),
      d1(grid->Np(), grid->hp(), 1, p_order_),
      d2(grid->Np(), grid->hp(), 2, p_order_)
{
    if (!(params.gamma >= 0)) throw ValidationError("gamma must be nonnegative");
    if (std::abs(grid->hbar() - params.hbar) > 1e-14 * params.hbar)
        throw ShapeError("grid was built for a different hbar");
    validate_potential(pot);
    const Grid& g = *grid;
    V.resize(g.Nx());
    dVdx.resize(g.Nx());
    for (int i = 0; i < g.Nx(); ++i) {
        V[i] = eval_potential(pot, g.x()[i]);
        dVdx[i] = eval_potential_gradient(pot, g.x()[i]);
    }
    dHdp.resize(g.Np());
    kinetic.resize(g.Np());
    for (int j = 0; j < g.Np(); ++j) {
        dHdp[j] = hamiltonian_dp(params, g.p()[j], mode);
        kinetic[j] = kinetic_energy(params, g.p()[j], mode);
    }
}

double OperatorContext::phase_energy(int ix, int jp) const
{
    const double h = kinetic[jp] + V[ix];
    return params.remove_rest_energy ? h : h + params.rest_energy();
}

void check_p_boundary(const WaveField& phi, const OperatorContext& ctx, Diagnostics* diag, const char* where)
{
    if (!diag) return;
    const double r = p_boundary_ratio(phi);
    if (r > ctx.boundary_tol)
        diag->warn(std::string(where) + ": |phi| at p-edge is " + std::to_string(r) + " of max (tol " +
                   std::to_string(ctx.boundary_tol) + ")");
}

WaveField apply_Dx(const WaveField& phi, const OperatorContext& ctx)
{
    check_grid(phi, ctx, "apply_Dx");
    const Grid& g = *ctx.grid;
    WaveField out{phi.grid, phi.values, phi.t};
    spectral_dx_inplace(g, out.values);
    const double inv_hbar = 1.0 / g.hbar();
    for (int i = 0; i < g.Nx(); ++i)
        for (int j = 0; j < g.Np(); ++j) {
            const auto k = g.index(i, j);
            out.values[k] -= cplx(0.0, g.p()[j] * inv_hbar) * phi.values[k];
        }
    return out;
}

WaveField apply_Dp(const WaveField& phi, const OperatorContext& ctx)
{
    check_grid(phi, ctx, "apply_Dp");
    WaveField out = zeros_wave(phi.grid, phi.t);
    apply_p_stencil(ctx.d1, *ctx.grid, phi.values.data(), out.values.data());
    return out;
}

WaveField apply_A(const WaveField& phi, const OperatorContext& ctx, Diagnostics* diag)
{
    check_grid(phi, ctx, "apply_A");
    check_p_boundary(phi, ctx, diag, "apply_A");
    const Grid& g = *ctx.grid;
    std::vector<cplx> dx = phi.values;
    spectral_dx_inplace(g, dx);
    WaveField out = zeros_wave(phi.grid, phi.t);
    apply_p_stencil(ctx.d1, g, phi.values.data(), out.values.data());
    const double inv_hbar = 1.0 / g.hbar();
    for (int i = 0; i < g.Nx(); ++i) {
        for (int j = 0; j < g.Np(); ++j) {
            const auto k = g.index(i, j);
            const cplx f = phi.values[k];
            const cplx shift = dx[k] - cplx(0.0, g.p()[j] * inv_hbar) * f;
            out.values[k] = ctx.dVdx[i] * out.values[k] - ctx.dHdp[j] * shift -
                            cplx(0.0, ctx.phase_energy(i, j) * inv_hbar) * f;
        }
    }
    return out;
}

WaveField apply_B(const WaveField& phi, const OperatorContext& ctx, Diagnostics* diag)
{
    check_grid(phi, ctx, "apply_B");
    check_p_boundary(phi, ctx, diag, "apply_B");
    const Grid& g = *ctx.grid;
    std::vector<cplx> flux = phi.values;
    spectral_dx_inplace(g, flux);
    const cplx ih(0.0, g.hbar());
    for (int i = 0; i < g.Nx(); ++i)
        for (int j = 0; j < g.Np(); ++j) {
            const auto k = g.index(i, j);
            flux[k] = g.p()[j] * phi.values[k] + ih * flux[k];
        }
    WaveField out = zeros_wave(phi.grid, phi.t);
    apply_p_stencil(ctx.d1, g, flux.data(), out.values.data());
    const double theta = ctx.theta();
    if (theta != 0.0) {
        std::vector<cplx> lap(g.size());
        apply_p_stencil(ctx.d2, g, phi.values.data(), lap.data());
        for (std::size_t k = 0; k < lap.size(); ++k) out.values[k] += theta * lap[k];
    }
    return out;
}

WaveField rhs_modified_kk(const WaveField& phi, const OperatorContext& ctx, Diagnostics* diag)
{
    WaveField out = apply_A(phi, ctx, diag);
    const double gamma = ctx.params.gamma;
    if (gamma != 0.0) {
        const WaveField b = apply_B(phi, ctx);
        for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += gamma * b.values[k];
    }
    return out;
}

DensityField rhs_liouville(const DensityField& rho, const OperatorContext& ctx)
{
    check_grid(rho, ctx, "rhs_liouville");
    const Grid& g = *ctx.grid;
    const auto dx = spectral_dx_real(g, rho.values);
    DensityField out = zeros_density(rho.grid, rho.t);
    apply_p_stencil(ctx.d1, g, rho.values.data(), out.values.data());
    for (int i = 0; i < g.Nx(); ++i)
        for (int j = 0; j < g.Np(); ++j) {
            const auto k = g.index(i, j);
            out.values[k] = ctx.dVdx[i] * out.values[k] - ctx.dHdp[j] * dx[k];
        }
    return out;
}

DensityField rhs_classical_kk(const DensityField& f, const OperatorContext& ctx)
{
    DensityField out = rhs_liouville(f, ctx);
    const double gamma = ctx.params.gamma;
    if (gamma == 0.0) return out;
    const Grid& g = *ctx.grid;
    std::vector<double> pf(g.size()), a(g.size()), b(g.size());
    for (int i = 0; i < g.Nx(); ++i)
        for (int j = 0; j < g.Np(); ++j) pf[g.index(i, j)] = g.p()[j] * f.values[g.index(i, j)];
    apply_p_stencil(ctx.d1, g, pf.data(), a.data());
    apply_p_stencil(ctx.d2, g, f.values.data(), b.data());
    const double theta = ctx.theta();
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += gamma * (a[k] + theta * b[k]);
    return out;
}

} // namespace kramers
