#include "doctest.h"
#include "util.hpp"

#include "kramers/analysis.hpp"
#include "kramers/integrator.hpp"
#include "kramers/oracles.hpp"
#include "kramers/projection.hpp"
#include "kramers/random_field.hpp"

#include <numbers>

using namespace kramers;
using testutil::params;

namespace {

struct Scalar {
    std::vector<cplx> values;
    double t = 0.0;
};

WaveField compact_field(GridPtr g, std::uint64_t seed)
{
    RandomSmoothSpec s;
    s.seed = seed;
    s.cutoff = 3;
    s.p_spread = 1.0;
    s.x_envelope = 1.0;
    return random_smooth_field(g, s);
}

} // namespace

TEST_CASE("stable_dt")
{
    SUBCASE("free particle")
    {
        auto g = make_grid(GridSpec{6.4, 64, 4.0, 64}, 1.0);
        OperatorContext ctx(params(0.0), FreePotential{}, HamiltonianMode::quadratic, g);
        const auto sd = stable_dt(ctx);
        const double pmax = 4.0 - 0.5 * g->hp();
        CHECK(sd.transport == doctest::Approx(2.0 * std::sqrt(2.0) / std::numbers::pi * 0.1 / pmax));
        CHECK(sd.phase == doctest::Approx(0.1 / (0.5 * pmax * pmax)));
        CHECK(sd.dt == std::min({sd.transport, sd.phase}));
        CHECK(sd.binding == "phase");
    }
    SUBCASE("large gamma makes diffusion bind")
    {
        auto g = make_grid(GridSpec{6.4, 64, 4.0, 64}, 1.0);
        OperatorContext a(params(100.0), FreePotential{}, HamiltonianMode::quadratic, g);
        OperatorContext b(params(200.0), FreePotential{}, HamiltonianMode::quadratic, g);
        CHECK(stable_dt(a).binding == "diffusion");
        CHECK(stable_dt(b).diffusion == doctest::Approx(0.5 * stable_dt(a).diffusion));
    }
    SUBCASE("doubling hp quadruples the diffusion bound")
    {
        auto g1 = make_grid(GridSpec{6.4, 64, 4.0, 64}, 1.0);
        auto g2 = make_grid(GridSpec{6.4, 64, 4.0, 32}, 1.0);
        OperatorContext a(params(10.0), FreePotential{}, HamiltonianMode::quadratic, g1);
        OperatorContext b(params(10.0), FreePotential{}, HamiltonianMode::quadratic, g2);
        CHECK(stable_dt(b).diffusion == doctest::Approx(4.0 * stable_dt(a).diffusion));
    }
}

TEST_CASE("rk4 step")
{
    const cplx lambda(-0.5, 2.0);
    auto rhs = [&](const Scalar& f) {
        Scalar o = f;
        for (auto& v : o.values) v *= lambda;
        return o;
    };
    Scalar f{{cplx(1.0, 0.5)}, 0.0};
    const Scalar same = step_rk4(f, rhs, 0.0);
    CHECK(same.values[0] == f.values[0]);

    std::vector<double> errs, hs;
    for (int n : {20, 40, 80}) {
        Scalar cur = f;
        const double dt = 1.0 / n;
        for (int k = 0; k < n; ++k) cur = step_rk4(cur, rhs, dt);
        errs.push_back(std::abs(cur.values[0] - f.values[0] * std::exp(lambda)));
        hs.push_back(dt);
    }
    CHECK(convergence_order(errs, hs) == doctest::Approx(4.0).epsilon(0.05));

    // linearity
    Scalar g2{{cplx(2.0, -1.0) * f.values[0]}, 0.0};
    CHECK(std::abs(step_rk4(g2, rhs, 0.1).values[0] - cplx(2.0, -1.0) * step_rk4(f, rhs, 0.1).values[0]) < 1e-13);

    auto bad = [](const Scalar& s) {
        Scalar o = s;
        o.values[0] = cplx(std::nan(""), 0);
        return o;
    };
    CHECK_THROWS_WITH_AS(step_rk4(f, bad, 0.1), doctest::Contains("k1"), DivergenceError);
}

TEST_CASE("exact B propagator")
{
    auto g = make_grid(GridSpec{20.0, 64, 12.0, 128, 1, -10.0}, 1.0);
    const Params p = params(5.0);
    OperatorContext ctx(p, HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
    RandomSmoothSpec s;
    s.seed = 4;
    s.cutoff = 4;
    const WaveField phi = random_smooth_field(g, s);

    CHECK(field_error(exact_b_propagator(phi, ctx, 0.0), phi, NormKind::relative_L2) < 1e-12);
    const WaveField ab = exact_b_propagator(exact_b_propagator(phi, ctx, 0.013), ctx, 0.021);
    CHECK(field_error(ab, exact_b_propagator(phi, ctx, 0.034), NormKind::relative_L2) < 1e-10);
    ProjectionContext pc(p, g);
    CHECK(field_error(exact_b_propagator(phi, ctx, 50.0 / p.gamma), project_p0(phi, pc), NormKind::relative_L2) < 1e-8);

    // short times agree with the generator
    const double tau = 1e-5;
    const WaveField moved = exact_b_propagator(phi, ctx, tau);
    const WaveField gen = apply_B(phi, ctx);
    WaveField fd = phi;
    for (std::size_t k = 0; k < fd.values.size(); ++k) fd.values[k] = (moved.values[k] - phi.values[k]) / (p.gamma * tau);
    CHECK(field_error(fd, gen, NormKind::relative_L2) < 1e-3);
}

TEST_CASE("evolution")
{
    SUBCASE("free flow matches the closed form")
    {
        auto g = make_grid(GridSpec{20.0, 64, 6.0, 64, 1, -10.0}, 1.0);
        OperatorContext ctx(params(0.0), FreePotential{}, HamiltonianMode::quadratic, g);
        const WaveField phi0 = compact_field(g, 2);
        const auto traj = evolve(phi0, ctx, StepPlan{Scheme::rk4_full, 1e-3, 1.0, 0, false});
        CHECK(field_error(traj.final_state, free_phase(phi0, ctx, 1.0), NormKind::relative_L2) < 1e-6);
        CHECK(traj.steps_taken == 1000);
        CHECK(traj.snapshot_times.size() == 2);
    }
    SUBCASE("gamma = 0 conserves the norm")
    {
        auto g = make_grid(GridSpec{12.0, 64, 8.0, 64, 1, -6.0}, 1.0);
        OperatorContext ctx(params(0.0), HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
        const WaveField phi0 = compact_field(g, 3);
        const double dt = 1.0 / std::ceil(1.0 / stable_dt(ctx).dt);
        const auto traj = evolve(phi0, ctx, StepPlan{Scheme::rk4_full, dt, 1.0, 0, false});
        const double m0 = phase_space_integral(rho_from_phi(phi0));
        CHECK(std::abs(phase_space_integral(rho_from_phi(traj.final_state)) - m0) / m0 < 1e-8);
    }
    SUBCASE("the two schemes agree")
    {
        // the finite-difference B and the exact OU step differ at O(hp^6), so the p grid is fine here
        auto g = make_grid(GridSpec{12.0, 32, 8.0, 256, 1, -6.0}, 1.0);
        OperatorContext ctx(params(1.0), HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
        const WaveField phi0 = compact_field(g, 5);
        const double dt = 0.5 * stable_dt(ctx).dt;
        const int n = static_cast<int>(std::ceil(0.25 / dt));
        const auto a = evolve(phi0, ctx, StepPlan{Scheme::rk4_full, 0.25 / n, 0.25, 0, false});
        const auto b = evolve(phi0, ctx, StepPlan{Scheme::strang_exactB_rk4A, 0.25 / n, 0.25, 0, false});
        CHECK(field_error(a.final_state, b.final_state, NormKind::relative_L2) < 1e-6);
    }
    SUBCASE("snapshots do not change the Strang result")
    {
        auto g = make_grid(GridSpec{12.0, 32, 8.0, 64, 1, -6.0}, 1.0);
        OperatorContext ctx(params(20.0), HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
        const WaveField phi0 = compact_field(g, 6);
        const auto a = evolve(phi0, ctx, StepPlan{Scheme::strang_exactB_rk4A, 0.01, 0.2, 0, false});
        const auto b = evolve(phi0, ctx, StepPlan{Scheme::strang_exactB_rk4A, 0.01, 0.2, 3, false});
        // merged half steps equal a full step up to the p-edge truncation of the OU step
        CHECK(field_error(a.final_state, b.final_state, NormKind::relative_L2) < 1e-6);
        CHECK(b.snapshot_times.size() == 8);
    }
}

TEST_CASE("plan checks")
{
    auto g = make_grid(GridSpec{12.0, 32, 8.0, 32, 1, -6.0}, 1.0);
    OperatorContext ctx(params(0.0), HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
    const WaveField phi0 = compact_field(g, 1);
    CHECK_THROWS_AS(plan_steps(StepPlan{Scheme::rk4_full, 0.3, 1.0, 0, false}), ValidationError);
    CHECK_THROWS_AS(evolve(phi0, ctx, StepPlan{Scheme::rk4_full, 0.5, 1.0, 0, false}), ValidationError);

    Diagnostics diag;
    const auto t = evolve(phi0, ctx, StepPlan{Scheme::rk4_full, 0.5, 20.0, 0, true}, {}, &diag);
    CHECK(t.aborted);
    CHECK(t.final_state.t == 0.0);
    CHECK(!diag.warnings.empty());
}
