#include "kramers/core_model.hpp"
#include "kramers/errors.hpp"

#include <cmath>

namespace kramers {

namespace {

void require_finite(double v, const char* name)
{
    if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

Params build_params(const ParamsInput& in)
{
    if (in.omega.has_value() == in.hbar.has_value())
        throw ConfigError("exactly one of omega and hbar must be given");
    if (in.beta.has_value() && in.gamma.has_value())
        throw ConfigError("beta and gamma are mutually exclusive");
    if (!in.beta && !in.gamma) throw ConfigError("one of beta or gamma must be given");
    if (!in.c) throw ConfigError("c must be given");
    if (!in.T) throw ConfigError("T must be given");

    Params p;
    p.m = in.m;
    p.c = *in.c;
    p.k_B = in.k_B;
    p.T = *in.T;
    p.d = in.d;
    p.remove_rest_energy = in.remove_rest_energy;

    require_finite(p.m, "m");
    require_finite(p.c, "c");
    require_finite(p.k_B, "k_B");
    require_finite(p.T, "T");
    if (p.m <= 0) throw ValidationError("m must be positive");
    if (p.c <= 0) throw ValidationError("c must be positive");
    if (p.T < 0) throw ValidationError("T must be nonnegative");
    if (p.k_B <= 0) throw ValidationError("k_B must be positive");
    if (p.d < 1) throw ValidationError("d must be at least 1");

    const double mc2 = p.m * p.c * p.c;
    if (in.omega) {
        require_finite(*in.omega, "omega");
        if (*in.omega <= 0) throw ValidationError("omega must be positive");
        p.omega = *in.omega;
        p.hbar = mc2 / p.omega;
    } else {
        require_finite(*in.hbar, "hbar");
        if (*in.hbar <= 0) throw ValidationError("hbar must be positive");
        p.hbar = *in.hbar;
        p.omega = mc2 / p.hbar;
    }

    if (in.beta) {
        require_finite(*in.beta, "beta");
        if (*in.beta < 0) throw ValidationError("beta must be nonnegative");
        p.beta = *in.beta;
        p.gamma = p.beta / p.m;
    } else {
        require_finite(*in.gamma, "gamma");
        if (*in.gamma < 0) throw ValidationError("gamma must be nonnegative");
        p.gamma = *in.gamma;
        p.beta = p.gamma * p.m;
    }
    return p;
}

Params with_gamma(Params p, double gamma)
{
    if (!(gamma >= 0) || !std::isfinite(gamma)) throw ValidationError("gamma must be finite and nonnegative");
    p.gamma = gamma;
    p.beta = gamma * p.m;
    return p;
}

Params with_temperature(Params p, double T)
{
    if (!(T >= 0) || !std::isfinite(T)) throw ValidationError("T must be finite and nonnegative");
    p.T = T;
    return p;
}

void validate_potential(const PotentialSpec& pot)
{
    std::visit(overloaded{
                   [](const FreePotential&) {},
                   [](const HarmonicPotential& h) {
                       require_finite(h.k, "potential.k");
                       if (h.k < 0) throw ValidationError("harmonic potential requires k >= 0");
                   },
                   [](const DoubleWellPotential& w) {
                       require_finite(w.a, "potential.a");
                       require_finite(w.b, "potential.b");
                   },
                   [](const PolynomialPotential& poly) {
                       for (double c : poly.coeffs) require_finite(c, "potential.coeffs");
                   },
               },
               pot);
}

std::string potential_kind(const PotentialSpec& pot)
{
    return std::visit(overloaded{
                          [](const FreePotential&) { return std::string("free"); },
                          [](const HarmonicPotential&) { return std::string("harmonic"); },
                          [](const DoubleWellPotential&) { return std::string("double_well"); },
                          [](const PolynomialPotential&) { return std::string("polynomial"); },
                      },
                      pot);
}

bool is_free(const PotentialSpec& pot)
{
    return std::holds_alternative<FreePotential>(pot);
}

double eval_potential(const PotentialSpec& pot, double x)
{
    return std::visit(overloaded{
                          [](const FreePotential&) { return 0.0; },
                          [x](const HarmonicPotential& h) { return 0.5 * h.k * x * x; },
                          [x](const DoubleWellPotential& w) {
                              const double u = x * x - w.a * w.a;
                              return w.b * u * u;
                          },
                          [x](const PolynomialPotential& poly) {
                              double v = 0.0;
                              for (auto it = poly.coeffs.rbegin(); it != poly.coeffs.rend(); ++it) v = v * x + *it;
                              return v;
                          },
                      },
                      pot);
}

double eval_potential_gradient(const PotentialSpec& pot, double x)
{
    return std::visit(overloaded{
                          [](const FreePotential&) { return 0.0; },
                          [x](const HarmonicPotential& h) { return h.k * x; },
                          [x](const DoubleWellPotential& w) { return 4.0 * w.b * x * (x * x - w.a * w.a); },
                          [x](const PolynomialPotential& poly) {
                              double v = 0.0;
                              const auto n = poly.coeffs.size();
                              for (std::size_t i = n; i-- > 1;) v = v * x + static_cast<double>(i) * poly.coeffs[i];
                              return v;
                          },
                      },
                      pot);
}

std::string to_string(HamiltonianMode mode)
{
    return mode == HamiltonianMode::quadratic ? "quadratic" : "exact_relativistic";
}

HamiltonianMode hamiltonian_mode_from_string(const std::string& s)
{
    if (s == "quadratic") return HamiltonianMode::quadratic;
    if (s == "exact_relativistic" || s == "exact") return HamiltonianMode::exact_relativistic;
    throw ConfigError("unknown hamiltonian mode '" + s + "'");
}

double kinetic_energy(const Params& params, double p, HamiltonianMode mode)
{
    if (mode == HamiltonianMode::quadratic) return p * p / (2.0 * params.m);
    const double mc = params.m * params.c;
    return params.c * p * p / (std::sqrt(mc * mc + p * p) + mc);
}

double eval_hamiltonian(const Params& params, const PotentialSpec& pot, double x, double p, HamiltonianMode mode)
{
    const double V = eval_potential(pot, x);
    if (mode == HamiltonianMode::quadratic) return params.rest_energy() + p * p / (2.0 * params.m) + V;
    const double mc = params.m * params.c;
    return params.c * std::sqrt(mc * mc + p * p) + V;
}

double hamiltonian_dx(const PotentialSpec& pot, double x)
{
    return eval_potential_gradient(pot, x);
}

double hamiltonian_dp(const Params& params, double p, HamiltonianMode mode)
{
    if (mode == HamiltonianMode::quadratic) return p / params.m;
    const double mc = params.m * params.c;
    return params.c * p / std::sqrt(mc * mc + p * p);
}

double phase_hamiltonian(const Params& params, const PotentialSpec& pot, double x, double p, HamiltonianMode mode)
{
    const double h = kinetic_energy(params, p, mode) + eval_potential(pot, x);
    return params.remove_rest_energy ? h : h + params.rest_energy();
}

} // namespace kramers
