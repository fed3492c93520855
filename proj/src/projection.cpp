#include "kramers/projection.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace kramers {

ProjectionContext::ProjectionContext(const Params& params_, GridPtr grid_, Diagnostics* diag)
    : params(params_), grid(std::move(grid_))
{
    if (!(params.T > 0) || !(params.m > 0)) throw DomainError("projection kernel is degenerate: need T > 0 and m > 0");
    if (params.d != grid->spec().d) throw ValidationError("params.d does not match the grid dimension");
    theta = params.kTm();
    sigma2 = params.hbar * params.hbar / theta;
    C = std::pow(4.0 * std::numbers::pi * theta, params.d / 4.0);
    const double sigma = std::sqrt(sigma2);
    if (sigma < 4.0 * grid->hx())
        warn(diag, "projection kernel width sigma=" + std::to_string(sigma) + " is below 4*hx");
    if (sigma > grid->Lx() / 8.0)
        warn(diag, "projection kernel width sigma=" + std::to_string(sigma) + " exceeds Lx/8");
}

PsiField extract_psi(const WaveField& phi, const ProjectionContext& ctx)
{
    require_same_grid(phi.grid, ctx.grid, "extract_psi");
    const Grid& g = *ctx.grid;
    PsiField psi = zeros_psi(phi.grid, phi.t);
    const double w = g.hp() / ctx.C;
    for (int i = 0; i < g.Nx(); ++i) {
        cplx acc = 0.0;
        for (int j = 0; j < g.Np(); ++j) acc += phi.values[g.index(i, j)];
        psi.values[i] = acc * w;
    }
    return psi;
}

WaveField embed_psi(const PsiField& psi, const ProjectionContext& ctx)
{
    require_same_grid(psi.grid, ctx.grid, "embed_psi");
    const Grid& g = *ctx.grid;
    if (static_cast<int>(psi.values.size()) != g.Nx()) throw ShapeError("embed_psi: psi size mismatch");
    const auto psit = x_fourier_1d(g, psi.values);
    const double pref = ctx.C / std::sqrt(2.0 * std::numbers::pi * ctx.theta);
    SpectralField ft{psi.grid, std::vector<cplx>(g.size()), psi.t};
    for (int n = 0; n < g.Nx(); ++n) {
        const cplx a = psit[n] * pref;
        for (int j = 0; j < g.Np(); ++j) {
            const double q = g.p()[j] - g.s()[n];
            ft.values[g.index(n, j)] = a * std::exp(-q * q / (2.0 * ctx.theta));
        }
    }
    return x_fourier_inverse(ft);
}

WaveField project_p0(const WaveField& phi, const ProjectionContext& ctx, ProjectionRoute route)
{
    require_same_grid(phi.grid, ctx.grid, "project_p0");
    if (route == ProjectionRoute::direct) return embed_psi(extract_psi(phi, ctx), ctx);

    const Grid& g = *ctx.grid;
    SpectralField ft = x_fourier(phi);
    const double norm = g.hp() / std::sqrt(2.0 * std::numbers::pi * ctx.theta);
    for (int n = 0; n < g.Nx(); ++n) {
        cplx* col = ft.values.data() + g.index(n, 0);
        cplx mass = 0.0;
        for (int j = 0; j < g.Np(); ++j) mass += col[j];
        mass *= norm;
        for (int j = 0; j < g.Np(); ++j) {
            const double q = g.p()[j] - g.s()[n];
            col[j] = mass * std::exp(-q * q / (2.0 * ctx.theta));
        }
    }
    return x_fourier_inverse(ft);
}

WaveField embed_psi_quadrature(const PsiField& psi, const ProjectionContext& ctx)
{
    require_same_grid(psi.grid, ctx.grid, "embed_psi_quadrature");
    const Grid& g = *ctx.grid;
    const int Nx = g.Nx(), Np = g.Np();
    const double hbar = g.hbar();
    const double L = g.Lx();
    const double reach = 40.0 * std::sqrt(ctx.sigma2);
    const int images = static_cast<int>(std::ceil(reach / L)) + 1;

    // kernel[d*Np + j] = sum_m exp(-theta (u+mL)^2 / 2hbar^2) exp(i p_j (u+mL)/hbar), u = d*hx
    std::vector<cplx> kernel(static_cast<std::size_t>(Nx) * Np);
    for (int d = 0; d < Nx; ++d) {
        for (int m = -images; m <= images; ++m) {
            const double u = d * g.hx() + m * L;
            const double gauss = std::exp(-ctx.theta * u * u / (2.0 * hbar * hbar));
            if (gauss < 1e-300) continue;
            for (int j = 0; j < Np; ++j) kernel[static_cast<std::size_t>(d) * Np + j] += std::polar(gauss, g.p()[j] * u / hbar);
        }
    }
    WaveField out = zeros_wave(psi.grid, psi.t);
    const double pref = std::pow(2.0 * std::numbers::pi * hbar, -g.spec().d) * ctx.C * g.hx();
    for (int i = 0; i < Nx; ++i) {
        cplx* row = out.values.data() + g.index(i, 0);
        for (int l = 0; l < Nx; ++l) {
            const cplx w = psi.values[l] * pref;
            const cplx* k = kernel.data() + static_cast<std::size_t>((i - l + Nx) % Nx) * Np;
            for (int j = 0; j < Np; ++j) row[j] += w * k[j];
        }
    }
    return out;
}

} // namespace kramers
