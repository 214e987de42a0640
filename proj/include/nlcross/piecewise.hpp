#pragma once

#include <utility>
#include <vector>

#include "nlcross/model.hpp"
#include "nlcross/ode.hpp"

namespace nlcross {

enum class Region { I, II };

// Region I: c1 U(3/4, xi1) + c2 V(3/4, xi1). Region II: c1 M_{k,1/4}(xi2) + c2 M_{k,-1/4}(xi2).
struct RegionCoefficients {
    cplx c1{0.0, 0.0}, c2{0.0, 0.0};
    Region region = Region::I;
};

cplx xi_region1(double x, const DerivedCoefficients& coeffs);
cplx xi_region2(double x, const DerivedCoefficients& coeffs);

// Basis functions of a region and their x-derivatives.
struct RegionBasis {
    cplx f1, df1, f2, df2;
};
RegionBasis region_basis(Region region, double x, const DerivedCoefficients& coeffs);

struct RegionValue {
    cplx value, derivative;
};
RegionValue evaluate_region(const RegionCoefficients& rc, double x, const DerivedCoefficients& coeffs);

// Solves for the coefficients from W1 and dW1/dx at the reference sample closest to x0.
RegionCoefficients fit_region1(const std::vector<W1Sample>& reference, double x0,
                               const DerivedCoefficients& coeffs);

RegionCoefficients match_at(double x_star, const RegionCoefficients& region1, const DerivedCoefficients& coeffs);

// max over reference samples with 0 < x < x_star of |W1_ref - region-II curve matched at x_star|.
double max_error(double x_star, const RegionCoefficients& region1, const DerivedCoefficients& coeffs,
                 const std::vector<W1Sample>& reference);

// Candidates are spaced geometrically between lo_fraction and hi_fraction of x0_fit.
struct TransitionSearch {
    double lo_fraction = 1e-3;
    double hi_fraction = 0.8;
    int points = 24;
    int refine_rounds = 2;
    int refine_points = 5;
    int jobs = 1;
};

struct TransitionPoint {
    double x_bar_star = 0.0;
    double e_min = 0.0;
    std::vector<std::pair<double, double>> evaluated;  // (x*, E) for every candidate tried
};

TransitionPoint optimize_transition_point(const RegionCoefficients& region1, const DerivedCoefficients& coeffs,
                                          const std::vector<W1Sample>& reference, double x0_fit,
                                          const TransitionSearch& search = {});

struct PiecewiseSolution {
    RegionCoefficients region1, region2;
    double x_star = 0.0;
    double x0_fit = 0.0;
    double x_ref_max = 0.0;  // largest reference x
    double max_error_at_star = 0.0;
    ModelParams params;
    // gamma < 0 is solved for (-alpha, -gamma) on conjugated data; evaluation conjugates back.
    bool conjugated = false;
};

struct PiecewiseOptions {
    double x0_fit = 0.0;  // <= 0: 0.9 times the largest reference x
    TransitionSearch search;
};

PiecewiseSolution build_piecewise(const ModelParams& params, const std::vector<W1Sample>& reference,
                                  const PiecewiseOptions& opts = {});

struct PiecewiseValue {
    cplx w1, w1_prime;
    Region region;
};
PiecewiseValue evaluate_piecewise(const PiecewiseSolution& sol, double x);

// p1(t) = |W1(t^2)|^2 / t for t > 0.
std::vector<std::pair<double, double>> population_curve(const PiecewiseSolution& sol,
                                                        const std::vector<double>& t_grid);

// Reference trajectory on a uniform t grid over [-t_max, t_max] with t = sqrt(x0) added, so the
// fit point is an integrator sample.
struct ReferenceOptions {
    double t_max = 20.0;
    int grid_points = 8001;
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    SeedConvention seed = SeedConvention::Adiabatic;
};
Trajectory reference_trajectory(const ModelParams& params, double x0, const ReferenceOptions& opts = {});

}  // namespace nlcross
