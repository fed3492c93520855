#pragma once

#include "kramers/core_model.hpp"
#include "kramers/errors.hpp"
#include "kramers/operators.hpp"
#include "kramers/phase_field.hpp"

#include <optional>

namespace kramers {

// Lorentz-transformed time for a particle at x moving with velocity v.
double proper_time(double t, double x, double v, const Params& params);
// Same through energy and momentum; V at x turns E into the full Hamiltonian.
double proper_time_from_momentum(double t, double x, double p, const Params& params,
                                 std::optional<double> potential_at_x = std::nullopt);
double velocity_from_momentum(double p, const Params& params);

WaveField free_phase(const WaveField& phi0, const OperatorContext& ctx, double t);

struct SchrodingerOptions {
    bool include_rest_energy = false;
    bool include_thermal_shift = true;
};

// Default flags matching the simulator's gauge choice.
SchrodingerOptions schrodinger_options_for(const Params& params);

double schrodinger_energy_shift(const Params& params, const SchrodingerOptions& opts);

PsiField schrodinger_rhs(const PsiField& psi, const Params& params, const PotentialSpec& pot,
                         const SchrodingerOptions& opts);

PsiField schrodinger_evolve(const PsiField& psi0, const Params& params, const PotentialSpec& pot, double t_end,
                            double dt, const SchrodingerOptions& opts, Diagnostics* diag = nullptr);

struct LiouvilleOptions {
    double substep = 1e-3;
    int interp_points = 6;      // 4: cubic, 6: quintic Lagrange
    double leak_tol = 1e-10;    // relative size of rho0 at the p-edge that makes leaving the domain an issue
};

DensityField liouville_transport(const DensityField& rho0, const OperatorContext& ctx, double t,
                                 Diagnostics* diag = nullptr, const LiouvilleOptions& opts = {});

struct OUMode {
    int n = 0;
    double s = 0.0;
    std::vector<cplx> values;  // over the p grid
    double eigenvalue = 0.0;   // of B
};

OUMode ou_mode(int n, double s, const Params& params, const Grid& grid);
// e^{i s x / hbar} times the mode profile; s must be a grid wavenumber.
WaveField embed_ou_mode(const OUMode& mode, GridPtr grid);

// probabilists' Hermite polynomial He_n
double hermite_he(int n, double x);

} // namespace kramers
