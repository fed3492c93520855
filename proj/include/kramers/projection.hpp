#pragma once

#include "kramers/core_model.hpp"
#include "kramers/errors.hpp"
#include "kramers/phase_field.hpp"

namespace kramers {

struct ProjectionContext {
    ProjectionContext(const Params& params, GridPtr grid, Diagnostics* diag = nullptr);

    Params params;
    GridPtr grid;
    double theta;        // k_B T m
    double sigma2;       // hbar^2 / (k_B T m)
    double C;            // (4 pi k_B T m)^(d/4)
};

enum class ProjectionRoute { direct, fourier };

PsiField extract_psi(const WaveField& phi, const ProjectionContext& ctx);
WaveField embed_psi(const PsiField& psi, const ProjectionContext& ctx);
WaveField project_p0(const WaveField& phi, const ProjectionContext& ctx, ProjectionRoute route = ProjectionRoute::fourier);

// Position-space quadrature of the Gaussian kernel with periodic images; O(Nx^2 Np), reference only.
WaveField embed_psi_quadrature(const PsiField& psi, const ProjectionContext& ctx);

} // namespace kramers
