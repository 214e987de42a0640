#pragma once

#include <utility>
#include <vector>

#include "nlcross/piecewise.hpp"

namespace nlcross {

// Neglected terms: G^I(x) = g1I/x + g2I/x^2 (region I), G^II(y) = g1II y + g2II y^2 (region II).
struct GPerturbations {
    cplx g1_I;
    double g2_I = 3.0 / 16.0;
    cplx g1_II, g2_II;
    cplx lambda;
};
GPerturbations g_perturbations(const DerivedCoefficients& coeffs);

// (1/gamma) [3/((m - 1/4)(m + 5/4)) + 4/(m + 1/2)] for 1/4 < m < 5/4, gamma > 0.
double region1_bound_coefficient(double m, double gamma);

struct BoundOptions {
    double m = 0.75;
    int sup_points = 400;
    double sup_safety = 1.05;
    double quad_tol = 1e-10;
    double x_max = 0.0;  // upper end of the region-I supremum; <= 0 uses the largest reference x
};

// Precomputes the region-I majorant on a geometric grid so repeated bound evaluations (bisection,
// reports at many x) share it.
class BoundModel {
public:
    explicit BoundModel(const PiecewiseSolution& sol, const BoundOptions& opts = {});

    // sup over (x, x_max] of y^m |W1_approx(y)|, times the safety factor.
    double region1_sup(double x) const;
    // coefficient(m, gamma) |G^I(x)|
    double region1_exponent(double x) const;
    double region1_bound(double x) const;

    // sup over (0, x) of |W1_approx|, times the safety factor.
    double region2_sup(double x) const;
    // E^II(x) = int_0^x |K^II(x, y) G^II(y)| dy.
    double region2_integral(double x) const;
    double region2_bound(double x) const;

    const PiecewiseSolution& solution() const { return sol_; }

private:
    double majorant1(double y) const;

    PiecewiseSolution sol_;
    BoundOptions opts_;
    DerivedCoefficients coeffs_;
    GPerturbations g_;
    double x_max_ = 0.0;
    std::vector<double> grid_, suffix_sup_;
};

double region1_error_bound(double x, const PiecewiseSolution& sol, const BoundOptions& opts = {});
double region2_error_integral(double x, const PiecewiseSolution& sol, const BoundOptions& opts = {});
double region2_error_bound(double x, const PiecewiseSolution& sol, const BoundOptions& opts = {});

struct BoundReport {
    double x = 0.0;
    double bound_region1 = 0.0, bound_region2 = 0.0;
    double sup_M1 = 0.0, sup_M2 = 0.0;
    double error_integral1 = 0.0, error_integral2 = 0.0;
    double observed_error = 0.0;  // |W1_ref - W1_approx| with the region picked by x against x_star
};

// x is snapped to the nearest reference sample so the observed error uses integrator data.
BoundReport bound_report(double x, const BoundModel& model, const std::vector<W1Sample>& reference);

// Root of eps^I(x) = eps^II(x) on [lo, hi] by bisection to relative width 1e-3.
double bound_crossing_point(const BoundModel& model, double lo, double hi);

// The region-I error integral with the unmodified kernel, int_x^X |K^I(x, y) G^I(y)| dy, for each
// upper limit X. It grows without bound; kept to show why the modified kernel is needed.
std::vector<std::pair<double, double>> unmodified_region1_integral(double x, const PiecewiseSolution& sol,
                                                                   const std::vector<double>& upper_limits,
                                                                   const BoundOptions& opts = {});

}  // namespace nlcross
