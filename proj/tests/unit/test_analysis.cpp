#include "doctest.h"
#include "util.hpp"

#include "kramers/analysis.hpp"
#include "kramers/errors.hpp"
#include "kramers/operators.hpp"
#include "kramers/random_field.hpp"

using namespace kramers;

TEST_CASE("field errors")
{
    auto g = make_grid(GridSpec{4.0, 16, 2.0, 16}, 1.0);
    RandomSmoothSpec s;
    s.seed = 8;
    const WaveField a = random_smooth_field(g, s);
    s.seed = 9;
    const WaveField b = random_smooth_field(g, s);
    CHECK(field_error(a, a, NormKind::L2) == 0.0);
    WaveField twice = a;
    for (auto& v : twice.values) v *= 2.0;
    CHECK(field_error(twice, a, NormKind::relative_L2) == doctest::Approx(1.0).epsilon(1e-15));

    double sum = 0, mx = 0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        sum += std::norm(a.values[k] - b.values[k]);
        mx = std::max(mx, std::abs(a.values[k] - b.values[k]));
    }
    CHECK(field_error(a, b, NormKind::L2) == doctest::Approx(std::sqrt(sum * g->hx() * g->hp())).epsilon(1e-14));
    CHECK(field_error(a, b, NormKind::Linf) == doctest::Approx(mx).epsilon(1e-14));

    auto h = make_grid(GridSpec{4.0, 32, 2.0, 16}, 1.0);
    CHECK_THROWS_AS(field_error(a, zeros_wave(h), NormKind::L2), ShapeError);
}

TEST_CASE("decay-rate fits")
{
    MetricSeries exact{"e", {}, {}}, flat{"c", {}, {}}, wobble{"w", {}, {}};
    for (int k = 0; k <= 100; ++k) {
        const double t = 0.02 * k;
        exact.push(t, std::exp(-3.0 * t));
        flat.push(t, 0.7);
        wobble.push(t, std::exp(-5.0 * t) * (1.0 + 0.01 * std::sin(t)));
    }
    CHECK(fit_decay_rate(exact).rate == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(std::abs(fit_decay_rate(flat).rate) < 1e-12);
    CHECK(fit_decay_rate(wobble).rate == doctest::Approx(5.0).epsilon(0.01));
    CHECK(fit_decay_rate(exact, std::make_pair(0.5, 1.0)).rate == doctest::Approx(3.0).epsilon(1e-10));
    CHECK_THROWS(exact.push(1.0, 0.1));
}

TEST_CASE("convergence order")
{
    const std::vector<double> h{0.4, 0.2, 0.1};
    CHECK(convergence_order({0.16 * 3, 0.04 * 3, 0.01 * 3}, h) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(convergence_order({std::pow(0.4, 4), std::pow(0.2, 4), std::pow(0.1, 4)}, h) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(convergence_order({1.0, 0.5}, {1.0, 0.5}), PreconditionError);

    // truncation error of the 2nd-order D_p on a smooth field
    std::vector<double> errs, hs;
    for (int Np : {32, 64, 128}) {
        auto g = make_grid(GridSpec{4.0, 8, 6.0, Np}, 1.0);
        OperatorContext ctx(testutil::params(0.0), FreePotential{}, HamiltonianMode::quadratic, g, 2);
        WaveField f = zeros_wave(g);
        WaveField expect = f;
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < Np; ++j) {
                const double p = g->p()[j];
                f.at(i, j) = std::exp(-p * p / 2);
                expect.at(i, j) = -p * std::exp(-p * p / 2);
            }
        errs.push_back(field_error(apply_Dp(f, ctx), expect, NormKind::L2));
        hs.push_back(g->hp());
    }
    const double order = convergence_order(errs, hs);
    CHECK(order >= 1.7);
    CHECK(order <= 2.3);
}

TEST_CASE("scaling fits")
{
    const auto r = fit_scaling({25, 50, 100}, {0.04, 0.02, 0.01}, {true, true, true});
    CHECK(r.exponent == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.pair_ratios.size() == 2);
    CHECK(r.pair_ratios[0] == doctest::Approx(0.5));
    const auto one = fit_scaling({25, 50, 100}, {0.04, 0.0, 0.01}, {true, false, false});
    CHECK(std::isnan(one.exponent));
}

TEST_CASE("gamma study preconditions")
{
    SlowDynamicsScenario sc;
    sc.params = testutil::params(1.0, 0.5);
    sc.pot = HarmonicPotential{1.0};
    sc.grid = GridSpec{20.0, 64, 10.0, 64, 1, -10.0};
    CHECK_THROWS_AS(gamma_scaling_study(sc, {25.0}, 1.0), PreconditionError);
    CHECK_THROWS_AS(gamma_scaling_study(sc, {25.0, 50.0, 75.0}, 1.0), PreconditionError);
}

TEST_CASE("gaussian psi")
{
    auto g = make_grid(GridSpec{40.0, 256, 2.0, 8, 1, -20.0}, 1.0);
    const PsiField psi = gaussian_psi(g, 1.0, 1.5, 0.3);
    double m0 = 0, m1 = 0, m2 = 0;
    for (int i = 0; i < 256; ++i) {
        const double w = std::norm(psi.values[i]), x = g->x()[i];
        m0 += w * g->hx();
        m1 += w * x * g->hx();
        m2 += w * x * x * g->hx();
    }
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m2 - m1 * m1 == doctest::Approx(2.25).epsilon(1e-10));
}
