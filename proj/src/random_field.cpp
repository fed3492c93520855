#include "kramers/random_field.hpp"
#include "kramers/errors.hpp"

#include <cmath>
#include <numbers>

namespace kramers {

WaveField random_smooth_field(GridPtr grid, const RandomSmoothSpec& spec)
{
    const Grid& g = *grid;
    if (spec.cutoff < 0 || spec.cutoff >= g.Nx() / 2) throw ValidationError("random_smooth: cutoff out of range");
    if (spec.bumps < 1) throw ValidationError("random_smooth: bumps must be positive");
    if (!(spec.width_min > 0) || spec.width_max < spec.width_min) throw ValidationError("random_smooth: bad widths");

    Rng rng(spec.seed);
    WaveField out = zeros_wave(grid);
    std::vector<cplx> profile(g.Np());
    std::vector<cplx> wave(g.Nx());
    for (int n = -spec.cutoff; n <= spec.cutoff; ++n) {
        const double amp = 1.0 / (1.0 + std::abs(n));
        std::fill(profile.begin(), profile.end(), cplx(0.0));
        for (int b = 0; b < spec.bumps; ++b) {
            const cplx c = rng.complex_unit_box() * amp;
            const double mu = rng.uniform(-spec.p_spread, spec.p_spread);
            const double w = rng.uniform(spec.width_min, spec.width_max);
            for (int j = 0; j < g.Np(); ++j) {
                const double q = (g.p()[j] - mu) / w;
                profile[j] += c * std::exp(-0.5 * q * q);
            }
        }
        for (int i = 0; i < g.Nx(); ++i)
            wave[i] = std::polar(1.0, 2.0 * std::numbers::pi * n * (g.x()[i] - g.spec().x_min) / g.Lx());
        for (int i = 0; i < g.Nx(); ++i)
            for (int j = 0; j < g.Np(); ++j) out.values[g.index(i, j)] += wave[i] * profile[j];
    }
    if (spec.x_envelope > 0) {
        for (int i = 0; i < g.Nx(); ++i) {
            double u = g.x()[i] - spec.x_center;
            u -= g.Lx() * std::round(u / g.Lx());
            const double e = std::exp(-0.5 * u * u / (spec.x_envelope * spec.x_envelope));
            for (int j = 0; j < g.Np(); ++j) out.values[g.index(i, j)] *= e;
        }
    }
    return out;
}

} // namespace kramers
