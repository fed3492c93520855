#include "doctest.h"
#include "util.hpp"

#include "kramers/analysis.hpp"
#include "kramers/oracles.hpp"
#include "kramers/operators.hpp"
#include "kramers/random_field.hpp"

#include <numbers>

using namespace kramers;
using std::numbers::pi;
using testutil::params;

TEST_CASE("proper time")
{
    const Params p = params(0.0, 1.0, 1.0, 1.0);
    CHECK(proper_time(1.0, 3.7, 0.0, p) == 1.0);
    CHECK(proper_time(1.0, 0.0, 0.6, p) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK_THROWS_AS(proper_time(1.0, 0.0, 1.0, p), DomainError);

    Rng rng(99);
    for (int k = 0; k < 200; ++k) {
        const double t = rng.uniform(-5, 5), x = rng.uniform(-5, 5), pp = rng.uniform(-3, 3);
        const double a = proper_time(t, x, velocity_from_momentum(pp, p), p);
        const double b = proper_time_from_momentum(t, x, pp, p);
        const double scale = std::abs(t) * std::sqrt(1 + pp * pp) + std::abs(x * pp);
        CHECK(std::abs(a - b) <= 1e-12 * scale);
    }
}

TEST_CASE("free phase closed form")
{
    auto g = make_grid(GridSpec{8.0, 64, 4.0, 32, 1, -4.0}, 1.0);
    const Params p = params(0.0);
    OperatorContext ctx(p, FreePotential{}, HamiltonianMode::quadratic, g);
    auto profile = [&](double x, double pp) {
        return std::exp(0.8 * std::cos(2 * pi * (x + 4.0) / 8.0) - pp * pp) * cplx(1.0, 0.3 * std::sin(2 * pi * x / 8.0));
    };
    WaveField phi0 = zeros_wave(g);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 32; ++j) phi0.at(i, j) = profile(g->x()[i], g->p()[j]);

    CHECK(field_error(free_phase(phi0, ctx, 0.0), phi0, NormKind::relative_L2) == 0.0);
    const double t = 0.37;
    const WaveField ft = free_phase(phi0, ctx, t);
    double worst = 0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 32; ++j) {
            const double pp = g->p()[j];
            const cplx expect = profile(g->x()[i] - pp * t, pp) * std::polar(1.0, pp * pp / 2.0 * t);
            worst = std::max(worst, std::abs(ft.at(i, j) - expect));
        }
    CHECK(worst < 1e-10);

    OperatorContext bad(params(1.0), FreePotential{}, HamiltonianMode::quadratic, g);
    CHECK_THROWS_AS(free_phase(phi0, bad, 1.0), ContractError);
    OperatorContext bad2(p, HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
    CHECK_THROWS_AS(free_phase(phi0, bad2, 1.0), ContractError);
}

TEST_CASE("Schrodinger reference")
{
    const Params p = params(0.0);
    const SchrodingerOptions plain{false, false};

    SUBCASE("unitary")
    {
        auto g = make_grid(GridSpec{20.0, 128, 4.0, 8, 1, -10.0}, 1.0);
        const PsiField psi0 = gaussian_psi(g, 1.0, 0.8, 0.5);
        const PsiField psi = schrodinger_evolve(psi0, p, HarmonicPotential{1.0}, 1.3, 1e-3, plain);
        CHECK(l2_norm(psi) == doctest::Approx(l2_norm(psi0)).epsilon(1e-12));
    }
    SUBCASE("coherent state returns after one period")
    {
        auto g = make_grid(GridSpec{20.0, 128, 4.0, 8, 1, -10.0}, 1.0);
        const PsiField psi0 = gaussian_psi(g, 1.5, std::sqrt(0.5), 0.0);
        const PsiField psi = schrodinger_evolve(psi0, p, HarmonicPotential{1.0}, 2 * pi, 2 * pi / 20000, plain);
        double num = 0, den = 0;
        for (int i = 0; i < g->Nx(); ++i) {
            num += g->x()[i] * std::norm(psi.values[i]);
            den += std::norm(psi.values[i]);
        }
        CHECK(std::abs(num / den - 1.5) < 1e-6);
    }
    SUBCASE("free spreading")
    {
        auto g = make_grid(GridSpec{60.0, 512, 4.0, 8, 1, -30.0}, 1.0);
        const double s0 = 1.0, t = 2.0;
        const PsiField psi = schrodinger_evolve(gaussian_psi(g, 0.0, s0, 0.0), p, FreePotential{}, t, 0.01, plain);
        double m0 = 0, m1 = 0, m2 = 0;
        for (int i = 0; i < g->Nx(); ++i) {
            const double w = std::norm(psi.values[i]), x = g->x()[i];
            m0 += w;
            m1 += w * x;
            m2 += w * x * x;
        }
        const double var = m2 / m0 - (m1 / m0) * (m1 / m0);
        CHECK(var == doctest::Approx(s0 * s0 + std::pow(t / (2 * s0), 2)).epsilon(1e-8));
    }
    SUBCASE("energy shift")
    {
        const Params q = params(0.0, 0.5);
        CHECK(schrodinger_energy_shift(q, SchrodingerOptions{true, true}) == doctest::Approx(q.rest_energy() - 0.25));
        CHECK(schrodinger_energy_shift(q, SchrodingerOptions{false, true}) == doctest::Approx(-0.25));
        CHECK(schrodinger_energy_shift(q, SchrodingerOptions{false, false}) == 0.0);
    }
}

TEST_CASE("Liouville transport")
{
    auto g = make_grid(GridSpec{12.0, 128, 6.0, 128, 1, -6.0}, 1.0);
    const Params p = params(0.0);
    OperatorContext ctx(p, HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
    const double x0 = 1.0, p0 = -0.5;
    DensityField rho = zeros_density(g);
    for (int i = 0; i < 128; ++i)
        for (int j = 0; j < 128; ++j) {
            const double dx = g->x()[i] - x0, dp = g->p()[j] - p0;
            rho.values[g->index(i, j)] = std::exp(-(dx * dx + dp * dp) / 0.5);
        }
    CHECK(field_error(liouville_transport(rho, ctx, 0.0), rho, NormKind::relative_L2) == 0.0);

    const double t = 1.1;
    const DensityField out = liouville_transport(rho, ctx, t);
    double m = 0, mx = 0, mp = 0;
    for (int i = 0; i < 128; ++i)
        for (int j = 0; j < 128; ++j) {
            const double w = out.values[g->index(i, j)];
            m += w;
            mx += w * g->x()[i];
            mp += w * g->p()[j];
        }
    CHECK(mx / m == doctest::Approx(x0 * std::cos(t) + p0 * std::sin(t)).epsilon(1e-6));
    CHECK(mp / m == doctest::Approx(-x0 * std::sin(t) + p0 * std::cos(t)).epsilon(1e-6));
    CHECK(std::abs(phase_space_integral(out) - phase_space_integral(rho)) / phase_space_integral(rho) < 1e-8);
}

TEST_CASE("OU modes")
{
    auto g = make_grid(GridSpec{20.0, 32, 12.0, 256, 1, -10.0}, 1.0);
    const Params p = params(1.0, 1.2);
    OperatorContext ctx(p, HarmonicPotential{1.0}, HamiltonianMode::quadratic, g);
    const double s = g->s()[16 + 2];
    for (int n = 0; n <= 2; ++n) {
        const WaveField mode = embed_ou_mode(ou_mode(n, s, p, *g), g);
        WaveField expect = mode;
        for (auto& v : expect.values) v *= -static_cast<double>(n);
        CHECK(field_error(apply_B(mode, ctx), expect, NormKind::L2) / l2_norm(mode) < 1e-5);
    }
    std::vector<OUMode> modes;
    for (int n = 0; n <= 4; ++n) modes.push_back(ou_mode(n, s, p, *g));
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b) {
            cplx ab = 0;
            double aa = 0, bb = 0;
            for (int j = 0; j < g->Np(); ++j) {
                const double q = g->p()[j] - s;
                const double w = std::exp(q * q / (2 * p.kTm()));
                ab += modes[a].values[j] * std::conj(modes[b].values[j]) * w;
                aa += std::norm(modes[a].values[j]) * w;
                bb += std::norm(modes[b].values[j]) * w;
            }
            if (a != b) CHECK(std::abs(ab) <= 1e-8 * std::sqrt(aa * bb));
        }
    CHECK_THROWS(embed_ou_mode(ou_mode(0, 0.5 * g->ds(), p, *g), g));
    CHECK(hermite_he(3, 2.0) == doctest::Approx(2.0));  // x^3 - 3x
}
