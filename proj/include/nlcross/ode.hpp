#pragma once

#include <vector>

#include "nlcross/model.hpp"

namespace nlcross {

struct AmplitudeSample {
    double t = 0.0;
    cplx c1{0.0, 0.0};
    cplx c2{1.0, 0.0};
    double norm_tol = 1e-8;

    double norm_drift() const { return std::abs(std::norm(c1) + std::norm(c2) - 1.0); }
};

// How C1 is seeded at the left edge of the window.
//  Adiabatic: C1 = f C2 e^{-i Phi} (1/Delta + i Delta'/Delta^3), the first two terms of the
//             integration-by-parts expansion. Default.
//  PaperWkb:  C1 = (2|f|/|gamma|) t0^-3 e^{-2i theta(t0)}, literally as the boundary amplitude
//             is quoted. Twice the physical tail amplitude; kept for reproduction.
enum class SeedConvention { Adiabatic, PaperWkb };

struct IntegratorConfig {
    double t_start = -20.0;
    double t_end = 20.0;
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double max_step = 0.0;  // <= 0 means no global cap beyond the phase rule
    std::vector<double> dense_output_grid;  // empty: uniform grid with grid_points samples
    int grid_points = 4001;
    SeedConvention seed = SeedConvention::Adiabatic;
    double seed_phase = 0.0;  // global phase injected on the seed (diagnostic)
    double seed_ratio_max = 0.01;

    void validate() const;
};

struct Trajectory {
    std::vector<AmplitudeSample> samples;
    double norm_drift_max = 0.0;
    ModelParams params;
    // Mean of |C1|^2 over the last period of the residual beat, filled by integrate().
    double tail_average = -1.0;
    double tail_start = 0.0;
    double t_end = 0.0;
    long steps_accepted = 0;
    long steps_rejected = 0;
};

AmplitudeSample seed_initial_state(const ModelParams& params, double t0,
                                   SeedConvention seed = SeedConvention::Adiabatic,
                                   double seed_ratio_max = 0.01);

Trajectory integrate(const ModelParams& params, const IntegratorConfig& config);

double final_probability(const Trajectory& trajectory, double seed_ratio_max = 0.01);

struct W1Sample {
    double x;
    cplx w1;
    cplx w1_prime;  // dW1/dx
};

std::vector<W1Sample> trajectory_in_w1(const Trajectory& trajectory);

// dC1/dt from the coupled equations.
cplx c1_dot(const ModelParams& params, double t, cplx c2);

// Convenience: window [-t_max, t_max] with defaults otherwise.
IntegratorConfig symmetric_window(double t_max, int grid_points = 4001);

}  // namespace nlcross
