#include "doctest.h"
#include "util.hpp"

#include "kramers/analysis.hpp"
#include "kramers/operators.hpp"
#include "kramers/projection.hpp"
#include "kramers/random_field.hpp"

#include <numbers>

using namespace kramers;
using testutil::params;
using testutil::rel_diff;

namespace {

GridPtr small_grid(int n = 64, double Pmax = 8.0)
{
    return make_grid(GridSpec{12.0, n, Pmax, n, 1, -6.0}, 1.0);
}

WaveField smooth(GridPtr g, std::uint64_t seed)
{
    RandomSmoothSpec s;
    s.seed = seed;
    s.cutoff = 3;
    return random_smooth_field(g, s);
}

} // namespace

TEST_CASE("D_x annihilates matched plane waves")
{
    // p grid on the integers, s grid on the integers: every p is an s
    auto g = make_grid(GridSpec{2.0 * std::numbers::pi, 32, 8.5, 17}, 1.0);
    OperatorContext ctx(params(0.0), FreePotential{}, HamiltonianMode::quadratic, g);
    WaveField phi = zeros_wave(g);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 17; ++j)
            phi.at(i, j) = std::polar(std::exp(-0.1 * g->p()[j] * g->p()[j]), g->p()[j] * g->x()[i]);
    CHECK(testutil::max_abs(apply_Dx(phi, ctx).values) < 1e-10);

    WaveField flat = zeros_wave(g);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 17; ++j) flat.at(i, j) = std::exp(-0.2 * g->p()[j] * g->p()[j]);
    const WaveField d = apply_Dx(flat, ctx);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 17; ++j) CHECK(std::abs(d.at(i, j) - cplx(0, -g->p()[j]) * flat.at(i, j)) < 1e-13);
}

TEST_CASE("commutator of the shift operators")
{
    for (int order : {2, 6}) {
        std::vector<double> errs, hs;
        for (int Np : {32, 64, 128}) {
            auto g = make_grid(GridSpec{12.0, 32, 8.0, Np, 1, -6.0}, 1.0);
            OperatorContext ctx(params(0.0), FreePotential{}, HamiltonianMode::quadratic, g, order);
            const WaveField phi = smooth(g, 7);
            const WaveField a = apply_Dp(apply_Dx(phi, ctx), ctx);
            const WaveField b = apply_Dx(apply_Dp(phi, ctx), ctx);
            WaveField r = a;
            for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = a.values[k] - b.values[k] + cplx(0, 1) * phi.values[k];
            errs.push_back(l2_norm(r) / l2_norm(phi));
            hs.push_back(g->hp());
        }
        CHECK(convergence_order(errs, hs) >= 1.7);
    }
}

TEST_CASE("operator A")
{
    auto g = small_grid(32);
    Params p = params(0.0);
    p.remove_rest_energy = false;

    SUBCASE("zero in, zero out")
    {
        OperatorContext ctx(p, HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
        CHECK(testutil::max_abs(apply_A(zeros_wave(g), ctx).values) == 0.0);
    }
    SUBCASE("free, x-independent, rest energy kept")
    {
        OperatorContext ctx(p, FreePotential{}, HamiltonianMode::quadratic, g);
        WaveField phi = zeros_wave(g);
        for (int i = 0; i < g->Nx(); ++i)
            for (int j = 0; j < g->Np(); ++j) phi.at(i, j) = std::exp(-0.3 * g->p()[j] * g->p()[j]);
        const WaveField a = apply_A(phi, ctx);
        for (int i = 0; i < g->Nx(); ++i)
            for (int j = 0; j < g->Np(); ++j) {
                const double pp = g->p()[j];
                const cplx expect = cplx(0, 1) * (pp * pp / 2.0 - p.rest_energy()) * phi.at(i, j);
                CHECK(std::abs(a.at(i, j) - expect) <= 1e-12 * std::abs(expect) + 1e-14);
            }
    }
    SUBCASE("simplified form on a random field")
    {
        const HarmonicPotential pot{2.0};
        OperatorContext ctx(p, pot, HamiltonianMode::quadratic, g);
        const WaveField phi = smooth(g, 11);
        std::vector<cplx> dx = phi.values, dp(phi.values.size());
        spectral_dx_inplace(*g, dx);
        for (int i = 0; i < g->Nx(); ++i) ctx.d1.apply(&phi.values[g->index(i, 0)], &dp[g->index(i, 0)]);
        std::vector<cplx> expect(phi.values.size());
        for (int i = 0; i < g->Nx(); ++i)
            for (int j = 0; j < g->Np(); ++j) {
                const auto k = g->index(i, j);
                const double x = g->x()[i], pp = g->p()[j];
                const double V = eval_potential(pot, x);
                expect[k] = -pp * dx[k] + eval_potential_gradient(pot, x) * dp[k] +
                            cplx(0, 1) * (pp * pp / 2.0 - p.rest_energy() - V) * phi.values[k];
            }
        CHECK(rel_diff(apply_A(phi, ctx).values, expect) < 1e-12);
    }
}

TEST_CASE("operator B")
{
    const Params p = params(1.0, 1.5);
    SUBCASE("thermal Gaussian is stationary")
    {
        auto g = make_grid(GridSpec{4.0, 16, 10.0, 256}, 1.0);
        OperatorContext ctx(p, FreePotential{}, HamiltonianMode::quadratic, g);
        WaveField phi = zeros_wave(g);
        for (int i = 0; i < 16; ++i)
            for (int j = 0; j < 256; ++j) phi.at(i, j) = std::exp(-g->p()[j] * g->p()[j] / (2.0 * p.kTm()));
        CHECK(l2_norm(apply_B(phi, ctx)) / l2_norm(phi) < 1e-6);
    }
    SUBCASE("projected fields are stationary")
    {
        auto g = make_grid(GridSpec{20.0, 64, 12.0, 256, 1, -10.0}, 1.0);
        OperatorContext ctx(params(1.0), HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
        ProjectionContext pc(params(1.0), g);
        const WaveField p0 = project_p0(smooth(g, 5), pc);
        CHECK(l2_norm(apply_B(p0, ctx)) / l2_norm(p0) < 1e-6);
    }
}

TEST_CASE("modified Klein-Kramers right-hand side")
{
    auto g = small_grid(32);
    const WaveField phi = smooth(g, 3);
    OperatorContext c0(params(0.0), HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
    CHECK(rel_diff(rhs_modified_kk(phi, c0).values, apply_A(phi, c0).values) == 0.0);
    OperatorContext c3(params(3.0), HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
    CHECK(testutil::max_abs(rhs_modified_kk(zeros_wave(g), c3).values) == 0.0);
    const WaveField a = apply_A(phi, c3), b = apply_B(phi, c3);
    std::vector<cplx> sum(a.values.size());
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = a.values[k] + 3.0 * b.values[k];
    CHECK(rel_diff(rhs_modified_kk(phi, c3).values, sum) < 1e-14);
}

TEST_CASE("classical equations")
{
    const HarmonicPotential pot{1.0};
    SUBCASE("Liouville right-hand side")
    {
        auto g = small_grid(32);
        OperatorContext ctx(params(0.0), pot, HamiltonianMode::quadratic, g);
        DensityField one = zeros_density(g);
        for (auto& v : one.values) v = 2.5;
        CHECK(testutil::max_abs(rhs_liouville(one, ctx).values) < 1e-12);

        const DensityField rnd = rho_from_phi(smooth(g, 9));
        OperatorContext kk(params(0.0), pot, HamiltonianMode::quadratic, g);
        CHECK(rhs_liouville(rnd, ctx).values == rhs_classical_kk(rnd, kk).values);
    }
    SUBCASE("functions of H are stationary under Liouville")
    {
        std::vector<double> errs, hs;
        for (int n : {32, 64, 128}) {
            auto g = make_grid(GridSpec{16.0, n, 8.0, n, 1, -8.0}, 1.0);
            OperatorContext ctx(params(0.0), pot, HamiltonianMode::quadratic, g, 2);
            DensityField f = zeros_density(g);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double H = 0.5 * g->x()[i] * g->x()[i] + 0.5 * g->p()[j] * g->p()[j];
                    f.values[g->index(i, j)] = std::exp(-H) * (1.0 + 0.5 * std::sin(H));
                }
            errs.push_back(l2_norm(rhs_liouville(f, ctx)) / l2_norm(f));
            hs.push_back(g->hp());
        }
        CHECK(convergence_order(errs, hs) >= 1.7);
    }
    SUBCASE("Klein-Kramers against an independent assembly")
    {
        auto g = small_grid(32);
        const Params p = params(2.0, 0.7);
        OperatorContext ctx(p, pot, HamiltonianMode::quadratic, g);
        const DensityField f = rho_from_phi(smooth(g, 13));
        std::vector<cplx> fc(f.values.begin(), f.values.end()), dx = fc;
        spectral_dx_inplace(*g, dx);
        std::vector<double> pf(f.values.size()), dp(f.values.size()), dpp(f.values.size()), dpf(f.values.size());
        for (int i = 0; i < g->Nx(); ++i)
            for (int j = 0; j < g->Np(); ++j) pf[g->index(i, j)] = g->p()[j] * f.values[g->index(i, j)];
        for (int i = 0; i < g->Nx(); ++i) {
            const auto o = g->index(i, 0);
            ctx.d1.apply(&f.values[o], &dp[o]);
            ctx.d2.apply(&f.values[o], &dpp[o]);
            ctx.d1.apply(&pf[o], &dpf[o]);
        }
        std::vector<double> expect(f.values.size());
        for (int i = 0; i < g->Nx(); ++i)
            for (int j = 0; j < g->Np(); ++j) {
                const auto k = g->index(i, j);
                const double x = g->x()[i], pp = g->p()[j];
                expect[k] = -hamiltonian_dp(p, pp, HamiltonianMode::quadratic) * dx[k].real() + hamiltonian_dx(pot, x) * dp[k] +
                            p.gamma * (dpf[k] + p.kTm() * dpp[k]);
            }
        CHECK(rel_diff(rhs_classical_kk(f, ctx).values, expect) < 1e-12);
    }
    SUBCASE("Gibbs density is stationary")
    {
        auto g = make_grid(GridSpec{20.0, 128, 12.0, 128, 1, -10.0}, 1.0);
        const Params p = params(5.0);
        OperatorContext ctx(p, pot, HamiltonianMode::quadratic, g);
        DensityField f = zeros_density(g);
        for (int i = 0; i < 128; ++i)
            for (int j = 0; j < 128; ++j)
                f.values[g->index(i, j)] = std::exp(-(eval_hamiltonian(p, pot, g->x()[i], g->p()[j], HamiltonianMode::quadratic) -
                                                      p.rest_energy()));
        CHECK(l2_norm(rhs_classical_kk(f, ctx)) / l2_norm(f) < 1e-3);
    }
}

TEST_CASE("p-boundary monitoring reports, it does not stop")
{
    auto g = small_grid(16, 2.0);
    OperatorContext ctx(params(0.0), FreePotential{}, HamiltonianMode::quadratic, g);
    WaveField phi = zeros_wave(g);
    for (auto& v : phi.values) v = 1.0;
    Diagnostics diag;
    CHECK_NOTHROW(apply_A(phi, ctx, &diag));
    CHECK(!diag.warnings.empty());
}
