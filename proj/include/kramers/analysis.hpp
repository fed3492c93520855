#pragma once

#include "kramers/core_model.hpp"
#include "kramers/integrator.hpp"
#include "kramers/metrics.hpp"
#include "kramers/phase_field.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kramers {

enum class NormKind { L2, Linf, relative_L2 };

double field_error(const WaveField& a, const WaveField& b, NormKind norm);
double field_error(const DensityField& a, const DensityField& b, NormKind norm);
double field_error(const PsiField& a, const PsiField& b, NormKind norm);

struct DecayFit {
    double rate = 0.0;
    double residual = 0.0;   // rms of the log-linear fit
    std::size_t first = 0;   // window [first, last)
    std::size_t last = 0;
};

// Least-squares slope of -log(values) against time. Without an explicit
// window, points within 100x of the series floor are dropped.
DecayFit fit_decay_rate(const MetricSeries& series, std::optional<std::pair<double, double>> window = std::nullopt);

double convergence_order(const std::vector<double>& errors, const std::vector<double>& spacings);

struct ScalingReport {
    std::vector<double> abscissae;
    std::vector<double> errors;
    std::vector<bool> valid;
    std::vector<std::string> notes;
    double exponent = 0.0;
    double residual = 0.0;
    std::vector<double> pair_ratios;  // error[i+1]/error[i] over consecutive valid points
};

// log-log least-squares exponent over the valid points (needs at least 2 of them)
ScalingReport fit_scaling(std::vector<double> abscissae, std::vector<double> errors, std::vector<bool> valid);

struct SlowDynamicsScenario {
    Params params;              // gamma is overwritten per run
    PotentialSpec pot;
    GridSpec grid;
    int p_order = 6;
    double psi_center = 0.0;
    double psi_width = 1.0;     // standard deviation of |psi|^2
    double psi_momentum = 0.0;
    double dt = 1e-3;
    double reference_dt = 1e-4;
    double frequency = 1.0;     // gammas are given in units of this
};

PsiField gaussian_psi(GridPtr grid, double center, double width, double momentum);

struct SlowDynamicsRun {
    double gamma = 0.0;
    double error = 0.0;
    bool valid = false;
    std::string note;
    double psi_norm = 0.0;
    double reference_norm = 0.0;
};

SlowDynamicsRun slow_dynamics_error(const SlowDynamicsScenario& sc, double gamma_units, double t_check,
                                    Diagnostics* diag = nullptr);

ScalingReport gamma_scaling_study(const SlowDynamicsScenario& sc, const std::vector<double>& gammas, double t_check,
                                  Diagnostics* diag = nullptr);

} // namespace kramers
