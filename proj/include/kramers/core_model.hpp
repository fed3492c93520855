#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kramers {

struct ParamsInput {
    double m = 1.0;
    std::optional<double> c;
    std::optional<double> omega;
    std::optional<double> hbar;
    std::optional<double> beta;
    std::optional<double> gamma;
    double k_B = 1.0;
    std::optional<double> T;
    int d = 1;
    bool remove_rest_energy = true;
};

struct Params {
    double m = 1.0;
    double c = 1.0;
    double omega = 1.0;
    double hbar = 1.0;
    double beta = 0.0;
    double gamma = 0.0;
    double k_B = 1.0;
    double T = 0.0;
    int d = 1;
    bool remove_rest_energy = true;

    double kTm() const { return k_B * T * m; }
    double rest_energy() const { return m * c * c; }
};

Params build_params(const ParamsInput& in);

// Same parameters with a new friction coefficient (beta follows).
Params with_gamma(Params p, double gamma);
Params with_temperature(Params p, double T);

struct FreePotential {};
struct HarmonicPotential {
    double k = 1.0;
};
// V = b (x^2 - a^2)^2
struct DoubleWellPotential {
    double a = 1.0;
    double b = 1.0;
};
// V = sum_n coeffs[n] x^n
struct PolynomialPotential {
    std::vector<double> coeffs;
};

using PotentialSpec = std::variant<FreePotential, HarmonicPotential, DoubleWellPotential, PolynomialPotential>;

void validate_potential(const PotentialSpec& pot);
std::string potential_kind(const PotentialSpec& pot);
bool is_free(const PotentialSpec& pot);

double eval_potential(const PotentialSpec& pot, double x);
double eval_potential_gradient(const PotentialSpec& pot, double x);

enum class HamiltonianMode { quadratic, exact_relativistic };

std::string to_string(HamiltonianMode mode);
HamiltonianMode hamiltonian_mode_from_string(const std::string& s);

double eval_hamiltonian(const Params& params, const PotentialSpec& pot, double x, double p, HamiltonianMode mode);
double hamiltonian_dx(const PotentialSpec& pot, double x);
double hamiltonian_dp(const Params& params, double p, HamiltonianMode mode);

// Kinetic energy without the rest term: p^2/2m, or c sqrt(m^2c^2+p^2) - mc^2 in a cancellation-free form.
double kinetic_energy(const Params& params, double p, HamiltonianMode mode);

// H entering the phase term; mc^2 is dropped when the gauge flag is set.
double phase_hamiltonian(const Params& params, const PotentialSpec& pot, double x, double p, HamiltonianMode mode);

} // namespace kramers
