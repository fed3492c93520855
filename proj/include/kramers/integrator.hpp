#pragma once

#include "kramers/errors.hpp"
#include "kramers/metrics.hpp"
#include "kramers/operators.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace kramers {

enum class Scheme { rk4_full, strang_exactB_rk4A };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct StepPlan {
    Scheme scheme = Scheme::strang_exactB_rk4A;
    double dt = 1e-3;
    double t_end = 1.0;
    int snapshot_stride = 0;   // 0: initial and final state only
    bool allow_unstable = false;
};

struct StableDt {
    double dt = 0.0;
    std::string binding;
    double transport = 0.0;
    double force = 0.0;
    double diffusion = 0.0;
    double phase = 0.0;
};

StableDt stable_dt(const OperatorContext& ctx);

template <class Field>
void require_finite_stage(const Field& f, const char* stage)
{
    for (const auto& v : f.values) {
        if constexpr (requires { v.real(); }) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw DivergenceError(std::string("non-finite values in RK4 stage ") + stage);
        } else {
            if (!std::isfinite(v)) throw DivergenceError(std::string("non-finite values in RK4 stage ") + stage);
        }
    }
}

// Classical RK4 for a (linear or nonlinear) field RHS; works for WaveField and DensityField.
template <class Field, class Rhs>
Field step_rk4(const Field& f, Rhs&& rhs, double dt)
{
    if (!(dt >= 0)) throw ValidationError("step_rk4: dt must be nonnegative");
    Field out = f;
    out.t = f.t + dt;
    if (dt == 0.0) return out;
    const std::size_t n = f.values.size();
    Field tmp = f;

    const Field k1 = rhs(f);
    require_finite_stage(k1, "k1");
    for (std::size_t i = 0; i < n; ++i) tmp.values[i] = f.values[i] + (0.5 * dt) * k1.values[i];
    const Field k2 = rhs(tmp);
    require_finite_stage(k2, "k2");
    for (std::size_t i = 0; i < n; ++i) tmp.values[i] = f.values[i] + (0.5 * dt) * k2.values[i];
    const Field k3 = rhs(tmp);
    require_finite_stage(k3, "k3");
    for (std::size_t i = 0; i < n; ++i) tmp.values[i] = f.values[i] + dt * k3.values[i];
    const Field k4 = rhs(tmp);
    require_finite_stage(k4, "k4");
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = f.values[i] + w * (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] + k4.values[i]);
    return out;
}

// Exact flow of gamma*B over time tau, applied per s-column in the p-Fourier domain.
class OUPropagator {
public:
    OUPropagator(const Params& params, GridPtr grid, double tau);

    bool is_identity() const { return identity_; }
    void apply(SpectralField& ft) const;
    WaveField apply(const WaveField& phi) const;

private:
    GridPtr grid_;
    bool identity_ = false;
    int L_ = 0;
    std::vector<cplx> pre_;     // Np
    std::vector<cplx> kernel_;  // L, spectrum of the chirp, includes 1/L
    std::vector<cplx> mult_;    // Nx*Np
};

WaveField exact_b_propagator(const WaveField& phi, const OperatorContext& ctx, double dt);

using Observer = std::function<void(double t, const WaveField& phi)>;

struct Trajectory {
    std::vector<WaveField> snapshots;  // filled only when requested
    std::vector<double> snapshot_times;
    MetricSeries norm{"norm", {}, {}};
    MetricSeries boundary{"p_boundary_ratio", {}, {}};
    WaveField final_state;
    int steps_taken = 0;
    bool aborted = false;
    std::string abort_reason;
};

struct EvolveOptions {
    bool keep_snapshots = false;
    double divergence_factor = 1e3;
};

Trajectory evolve(const WaveField& phi0, const OperatorContext& ctx, const StepPlan& plan,
                  const std::vector<Observer>& observers = {}, Diagnostics* diag = nullptr,
                  const EvolveOptions& opts = {});

int plan_steps(const StepPlan& plan);

} // namespace kramers
