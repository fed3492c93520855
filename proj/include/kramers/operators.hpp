#pragma once

#include "kramers/core_model.hpp"
#include "kramers/errors.hpp"
#include "kramers/phase_field.hpp"
#include "kramers/stencil.hpp"

namespace kramers {

// Spectral in x, finite differences in p (see PStencil).
struct OperatorContext {
    OperatorContext(const Params& params, PotentialSpec pot, HamiltonianMode mode, GridPtr grid, int p_order = 6,
                    double boundary_tol = 1e-10);

    Params params;
    PotentialSpec pot;
    HamiltonianMode mode;
    GridPtr grid;
    int p_order;
    double boundary_tol;

    PStencil d1;
    PStencil d2;
    std::vector<double> V;      // per x node
    std::vector<double> dVdx;   // per x node
    std::vector<double> dHdp;   // per p node
    std::vector<double> kinetic;// per p node, rest energy excluded

    double theta() const { return params.kTm(); }
    // H in the phase term, honouring the gauge flag
    double phase_energy(int ix, int jp) const;
};

WaveField apply_Dx(const WaveField& phi, const OperatorContext& ctx);
WaveField apply_Dp(const WaveField& phi, const OperatorContext& ctx);

WaveField apply_A(const WaveField& phi, const OperatorContext& ctx, Diagnostics* diag = nullptr);
WaveField apply_B(const WaveField& phi, const OperatorContext& ctx, Diagnostics* diag = nullptr);

WaveField rhs_modified_kk(const WaveField& phi, const OperatorContext& ctx, Diagnostics* diag = nullptr);

DensityField rhs_liouville(const DensityField& rho, const OperatorContext& ctx);
DensityField rhs_classical_kk(const DensityField& f, const OperatorContext& ctx);

void check_p_boundary(const WaveField& phi, const OperatorContext& ctx, Diagnostics* diag, const char* where);

} // namespace kramers
