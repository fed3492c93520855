#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace kramers {

using cplx = std::complex<double>;

struct GridSpec {
    double Lx = 1.0;
    int Nx = 64;
    double Pmax = 1.0;
    int Np = 64;
    int d = 1;
    double x_min = 0.0;

    bool operator==(const GridSpec&) const = default;
};

void validate_grid_spec(const GridSpec& spec);

// x_i = x_min + i*hx (periodic), p_j = -Pmax + (j + 1/2)*hp,
// s_n = 2*pi*hbar*n/Lx for n = -Nx/2 .. Nx/2-1 (natural order).
class Grid {
public:
    Grid(const GridSpec& spec, double hbar);

    const GridSpec& spec() const { return spec_; }
    int Nx() const { return spec_.Nx; }
    int Np() const { return spec_.Np; }
    double hx() const { return hx_; }
    double hp() const { return hp_; }
    double ds() const { return ds_; }
    double hbar() const { return hbar_; }
    double Lx() const { return spec_.Lx; }
    double Pmax() const { return spec_.Pmax; }

    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& p() const { return p_; }
    const std::vector<double>& s() const { return s_; }

    std::size_t size() const { return static_cast<std::size_t>(spec_.Nx) * spec_.Np; }
    std::size_t index(int ix, int jp) const { return static_cast<std::size_t>(ix) * spec_.Np + jp; }

    bool same_as(const Grid& other) const;

private:
    GridSpec spec_;
    double hbar_;
    double hx_, hp_, ds_;
    std::vector<double> x_, p_, s_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(const GridSpec& spec, double hbar);

struct WaveField {
    GridPtr grid;
    std::vector<cplx> values;
    double t = 0.0;

    cplx& at(int ix, int jp) { return values[grid->index(ix, jp)]; }
    const cplx& at(int ix, int jp) const { return values[grid->index(ix, jp)]; }
};

struct DensityField {
    GridPtr grid;
    std::vector<double> values;
    double t = 0.0;
};

// values[n*Np + j] with n in natural order (n = 0 <-> s = -Nx/2 * ds)
struct SpectralField {
    GridPtr grid;
    std::vector<cplx> values;
    double t = 0.0;
};

struct PsiField {
    GridPtr grid;
    std::vector<cplx> values;
    double t = 0.0;
};

WaveField zeros_wave(GridPtr grid, double t = 0.0);
DensityField zeros_density(GridPtr grid, double t = 0.0);
PsiField zeros_psi(GridPtr grid, double t = 0.0);

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what);
void require_finite(const std::vector<cplx>& v, const char* what);

DensityField rho_from_phi(const WaveField& phi);

SpectralField x_fourier(const WaveField& phi);
WaveField x_fourier_inverse(const SpectralField& phit);

// Same pair for a single x-profile (PsiField <-> spectral samples in natural order).
std::vector<cplx> x_fourier_1d(const Grid& grid, const std::vector<cplx>& f);
std::vector<cplx> x_fourier_inverse_1d(const Grid& grid, const std::vector<cplx>& ft);

// In-place spectral derivative along x of every p-column of an x-major field.
void spectral_dx_inplace(const Grid& grid, std::vector<cplx>& v, int order = 1);

cplx phase_space_integral(const WaveField& f, const std::function<cplx(double, double)>& weight = {});
double phase_space_integral(const DensityField& f, const std::function<double(double, double)>& weight = {});

double l2_norm(const WaveField& f);
double l2_norm(const DensityField& f);
double l2_norm(const PsiField& f);
double l2_norm(const SpectralField& f);

std::vector<double> marginal_x(const DensityField& rho);

// max|phi| over the first and last p-rows divided by max|phi| overall (0 for the zero field).
double p_boundary_ratio(const WaveField& phi);

// Largest |s| of the spectral columns whose content exceeds tol * max content.
double occupied_s_extent(const WaveField& phi, double tol);

} // namespace kramers
