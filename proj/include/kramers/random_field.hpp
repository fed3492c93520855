#pragma once

#include "kramers/phase_field.hpp"

#include <cstdint>
#include <random>

namespace kramers {

// mt19937_64 with a fixed bits-to-double map, so streams agree across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    cplx complex_unit_box() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

private:
    std::mt19937_64 eng_;
};

struct RandomSmoothSpec {
    std::uint64_t seed = 1;
    int cutoff = 4;             // highest |n| of the x-modes e^{2 pi i n x / Lx}
    int bumps = 3;              // Gaussian bumps in p per x-mode
    double p_spread = 2.0;      // bump centres drawn from [-p_spread, p_spread]
    double width_min = 0.6;
    double width_max = 1.2;
    double x_envelope = 0.0;    // > 0: multiply by exp(-(x-x_center)^2 / (2 x_envelope^2))
    double x_center = 0.0;
};

// Band-limited in x (without envelope), smooth and Gaussian-decaying in p.
WaveField random_smooth_field(GridPtr grid, const RandomSmoothSpec& spec);

} // namespace kramers
