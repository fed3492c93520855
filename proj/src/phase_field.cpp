#include "kramers/phase_field.hpp"
#include "kramers/errors.hpp"
#include "kramers/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace kramers {

namespace {

bool is_pow2(int n)
{
    return n > 0 && (n & (n - 1)) == 0;
}

// e^{-i s_n x_min / hbar} * hx / sqrt(2 pi hbar), natural order
std::vector<cplx> forward_factors(const Grid& g)
{
    const double scale = g.hx() / std::sqrt(2.0 * std::numbers::pi * g.hbar());
    std::vector<cplx> f(g.Nx());
    for (int n = 0; n < g.Nx(); ++n) f[n] = std::polar(scale, -g.s()[n] * g.spec().x_min / g.hbar());
    return f;
}

std::vector<cplx> inverse_factors(const Grid& g)
{
    const double scale = g.ds() / std::sqrt(2.0 * std::numbers::pi * g.hbar());
    std::vector<cplx> f(g.Nx());
    for (int n = 0; n < g.Nx(); ++n) f[n] = std::polar(scale, g.s()[n] * g.spec().x_min / g.hbar());
    return f;
}

} // namespace

void validate_grid_spec(const GridSpec& spec)
{
    if (!(spec.Lx > 0) || !std::isfinite(spec.Lx)) throw ValidationError("grid.Lx must be positive");
    if (!(spec.Pmax > 0) || !std::isfinite(spec.Pmax)) throw ValidationError("grid.Pmax must be positive");
    if (spec.Nx < 8 || spec.Np < 8) throw ValidationError("grid.Nx and grid.Np must be at least 8");
    if (!is_pow2(spec.Nx)) throw ValidationError("grid.Nx must be a power of two");
    if (spec.d != 1) throw ValidationError("only d = 1 phase-space grids are implemented");
    if (!std::isfinite(spec.x_min)) throw ValidationError("grid.x_min must be finite");
}

Grid::Grid(const GridSpec& spec, double hbar) : spec_(spec), hbar_(hbar)
{
    validate_grid_spec(spec);
    if (!(hbar > 0)) throw ValidationError("hbar must be positive");
    hx_ = spec.Lx / spec.Nx;
    hp_ = 2.0 * spec.Pmax / spec.Np;
    ds_ = 2.0 * std::numbers::pi * hbar / spec.Lx;
    x_.resize(spec.Nx);
    p_.resize(spec.Np);
    s_.resize(spec.Nx);
    for (int i = 0; i < spec.Nx; ++i) x_[i] = spec.x_min + i * hx_;
    for (int j = 0; j < spec.Np; ++j) p_[j] = -spec.Pmax + (j + 0.5) * hp_;
    for (int n = 0; n < spec.Nx; ++n) s_[n] = ds_ * (n - spec.Nx / 2);
}

bool Grid::same_as(const Grid& other) const
{
    return this == &other || (spec_ == other.spec_ && hbar_ == other.hbar_);
}

GridPtr make_grid(const GridSpec& spec, double hbar)
{
    return std::make_shared<const Grid>(spec, hbar);
}

WaveField zeros_wave(GridPtr grid, double t)
{
    const auto n = grid->size();
    return WaveField{std::move(grid), std::vector<cplx>(n), t};
}

DensityField zeros_density(GridPtr grid, double t)
{
    const auto n = grid->size();
    return DensityField{std::move(grid), std::vector<double>(n), t};
}

PsiField zeros_psi(GridPtr grid, double t)
{
    const auto n = static_cast<std::size_t>(grid->Nx());
    return PsiField{std::move(grid), std::vector<cplx>(n), t};
}

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what)
{
    if (!a || !b) throw ShapeError(std::string(what) + ": field has no grid");
    if (!a->same_as(*b)) throw ShapeError(std::string(what) + ": grid mismatch");
}

void require_finite(const std::vector<cplx>& v, const char* what)
{
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw ValidationError(std::string(what) + ": non-finite entry");
}

DensityField rho_from_phi(const WaveField& phi)
{
    DensityField rho{phi.grid, std::vector<double>(phi.values.size()), phi.t};
    for (std::size_t k = 0; k < phi.values.size(); ++k) rho.values[k] = std::norm(phi.values[k]);
    return rho;
}

SpectralField x_fourier(const WaveField& phi)
{
    const Grid& g = *phi.grid;
    if (phi.values.size() != g.size()) throw ShapeError("x_fourier: field size does not match grid");
    const int Nx = g.Nx(), Np = g.Np();
    std::vector<cplx> tmp(g.size());
    fft::many(Nx, Np, Np, 1, fft::Direction::forward, phi.values.data(), tmp.data());
    const auto f = forward_factors(g);
    SpectralField out{phi.grid, std::vector<cplx>(g.size()), phi.t};
    for (int n = 0; n < Nx; ++n) {
        const int k = (n - Nx / 2 + Nx) % Nx;
        const cplx* src = tmp.data() + static_cast<std::size_t>(k) * Np;
        cplx* dst = out.values.data() + static_cast<std::size_t>(n) * Np;
        for (int j = 0; j < Np; ++j) dst[j] = src[j] * f[n];
    }
    return out;
}

WaveField x_fourier_inverse(const SpectralField& phit)
{
    const Grid& g = *phit.grid;
    if (phit.values.size() != g.size()) throw ShapeError("x_fourier_inverse: field size does not match grid");
    const int Nx = g.Nx(), Np = g.Np();
    const auto f = inverse_factors(g);
    std::vector<cplx> tmp(g.size());
    for (int n = 0; n < Nx; ++n) {
        const int k = (n - Nx / 2 + Nx) % Nx;
        const cplx* src = phit.values.data() + static_cast<std::size_t>(n) * Np;
        cplx* dst = tmp.data() + static_cast<std::size_t>(k) * Np;
        for (int j = 0; j < Np; ++j) dst[j] = src[j] * f[n];
    }
    WaveField out{phit.grid, std::vector<cplx>(g.size()), phit.t};
    fft::many(Nx, Np, Np, 1, fft::Direction::backward, tmp.data(), out.values.data());
    return out;
}

std::vector<cplx> x_fourier_1d(const Grid& g, const std::vector<cplx>& f)
{
    const int Nx = g.Nx();
    if (static_cast<int>(f.size()) != Nx) throw ShapeError("x_fourier_1d: size mismatch");
    std::vector<cplx> tmp(Nx), out(Nx);
    fft::forward(Nx, f.data(), tmp.data());
    const auto fac = forward_factors(g);
    for (int n = 0; n < Nx; ++n) out[n] = tmp[(n - Nx / 2 + Nx) % Nx] * fac[n];
    return out;
}

std::vector<cplx> x_fourier_inverse_1d(const Grid& g, const std::vector<cplx>& ft)
{
    const int Nx = g.Nx();
    if (static_cast<int>(ft.size()) != Nx) throw ShapeError("x_fourier_inverse_1d: size mismatch");
    const auto fac = inverse_factors(g);
    std::vector<cplx> tmp(Nx), out(Nx);
    for (int n = 0; n < Nx; ++n) tmp[(n - Nx / 2 + Nx) % Nx] = ft[n] * fac[n];
    fft::backward(Nx, tmp.data(), out.data());
    return out;
}

void spectral_dx_inplace(const Grid& g, std::vector<cplx>& v, int order)
{
    const int Nx = g.Nx(), Np = g.Np();
    fft::many(Nx, Np, Np, 1, fft::Direction::forward, v.data(), v.data());
    const double k0 = 2.0 * std::numbers::pi / g.Lx();
    for (int k = 0; k < Nx; ++k) {
        const int n = k < Nx / 2 ? k : k - Nx;
        cplx mult;
        if (k == Nx / 2 && order % 2 == 1) {
            mult = 0.0;
        } else {
            mult = std::pow(cplx(0.0, k0 * n), order);
        }
        mult /= static_cast<double>(Nx);
        cplx* row = v.data() + static_cast<std::size_t>(k) * Np;
        for (int j = 0; j < Np; ++j) row[j] *= mult;
    }
    fft::many(Nx, Np, Np, 1, fft::Direction::backward, v.data(), v.data());
}

cplx phase_space_integral(const WaveField& f, const std::function<cplx(double, double)>& weight)
{
    const Grid& g = *f.grid;
    cplx acc = 0.0;
    for (int i = 0; i < g.Nx(); ++i)
        for (int j = 0; j < g.Np(); ++j) {
            const cplx v = f.values[g.index(i, j)];
            acc += weight ? v * weight(g.x()[i], g.p()[j]) : v;
        }
    return acc * g.hx() * g.hp();
}

double phase_space_integral(const DensityField& f, const std::function<double(double, double)>& weight)
{
    const Grid& g = *f.grid;
    double acc = 0.0;
    for (int i = 0; i < g.Nx(); ++i)
        for (int j = 0; j < g.Np(); ++j) {
            const double v = f.values[g.index(i, j)];
            acc += weight ? v * weight(g.x()[i], g.p()[j]) : v;
        }
    return acc * g.hx() * g.hp();
}

double l2_norm(const WaveField& f)
{
    double acc = 0.0;
    for (const auto& z : f.values) acc += std::norm(z);
    return std::sqrt(acc * f.grid->hx() * f.grid->hp());
}

double l2_norm(const DensityField& f)
{
    double acc = 0.0;
    for (double v : f.values) acc += v * v;
    return std::sqrt(acc * f.grid->hx() * f.grid->hp());
}

double l2_norm(const PsiField& f)
{
    double acc = 0.0;
    for (const auto& z : f.values) acc += std::norm(z);
    return std::sqrt(acc * f.grid->hx());
}

double l2_norm(const SpectralField& f)
{
    double acc = 0.0;
    for (const auto& z : f.values) acc += std::norm(z);
    return std::sqrt(acc * f.grid->ds() * f.grid->hp());
}

std::vector<double> marginal_x(const DensityField& rho)
{
    const Grid& g = *rho.grid;
    std::vector<double> out(g.Nx(), 0.0);
    for (int i = 0; i < g.Nx(); ++i) {
        double acc = 0.0;
        for (int j = 0; j < g.Np(); ++j) acc += rho.values[g.index(i, j)];
        out[i] = acc * g.hp();
    }
    return out;
}

double p_boundary_ratio(const WaveField& phi)
{
    const Grid& g = *phi.grid;
    double peak = 0.0, edge = 0.0;
    for (int i = 0; i < g.Nx(); ++i) {
        for (int j = 0; j < g.Np(); ++j) peak = std::max(peak, std::abs(phi.values[g.index(i, j)]));
        edge = std::max({edge, std::abs(phi.values[g.index(i, 0)]), std::abs(phi.values[g.index(i, g.Np() - 1)])});
    }
    return peak > 0 ? edge / peak : 0.0;
}

double occupied_s_extent(const WaveField& phi, double tol)
{
    const auto ft = x_fourier(phi);
    const Grid& g = *phi.grid;
    std::vector<double> col(g.Nx(), 0.0);
    double peak = 0.0;
    for (int n = 0; n < g.Nx(); ++n) {
        double m = 0.0;
        for (int j = 0; j < g.Np(); ++j) m = std::max(m, std::abs(ft.values[g.index(n, j)]));
        col[n] = m;
        peak = std::max(peak, m);
    }
    double extent = 0.0;
    for (int n = 0; n < g.Nx(); ++n)
        if (col[n] > tol * peak) extent = std::max(extent, std::abs(g.s()[n]));
    return extent;
}

} // namespace kramers
