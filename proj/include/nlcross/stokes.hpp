#pragma once

#include <array>
#include <vector>

#include "nlcross/model.hpp"

namespace nlcross {

// Coefficients of T'' = (1/4 + sum_n Q_n tau^{-n/2}) T. rho is carried exactly (+-3/8) so that
// gamma-function arguments built from mu2 = rho stay real.
struct StokesParams {
    cplx Q1, Q2, Q3, Q4;
    double rho = 0.0;
};

StokesParams stokes_params(const DerivedCoefficients& coeffs);
// (Q1, Q2, Q3) -> (-i Q1, -Q2, i Q3), rho -> -rho.
StokesParams bar(const StokesParams& q);

// Formal solutions tau^{eps rho} e^{eps(tau/2 + 2 Q1 tau^{1/2})} sum_n a_n tau^{-n/2}, a_0 = 1.
// eps = +1 reproduces the published c_n recurrence; eps = -1 gives the d_n series.
std::vector<cplx> formal_coefficients(const StokesParams& q, int eps, int count);

// Value and tau-derivative of the optimally truncated formal solution at tau = r e^{i theta},
// with theta taken as a continuous argument.
struct FormalValue {
    cplx value, derivative;
    double smallest_term;
    int terms;
};
FormalValue evaluate_formal(const StokesParams& q, int eps, const std::vector<cplx>& coeffs, double r,
                            double theta);

// Verbatim: chi_n closed forms and recursion as printed, c_{pm}/d_{pm} for p >= 1 only.
// Corrected: chi_n from the series of mu'/(2 mu), and the p = 0 terms of the alpha recursions kept.
enum class StokesVariant { Verbatim, Corrected };

struct RecursionState {
    StokesParams q;
    StokesVariant variant = StokesVariant::Corrected;
    int order = 0;
    int root_index = 0;  // which root of v1^2 - v1 + P1 = 0 (0: (1+s)/2, 1: (1-s)/2)
    cplx v1;
    double min_denominator = 0.0;  // min over 2 <= n <= N of |(n+1)/2 - 2 v1|
    cplx mu1, mu2, mu3;
    std::array<cplx, 4> P{};  // P[1..3]
    // Index n holds the coefficient with subscript n; unused slots are zero.
    std::vector<cplx> chi, v, B, B1, B2;
    std::vector<cplx> alpha1, alpha2, beta1, beta2, delta1, delta2;
};

// root < 0 selects the root by the smallest maximal inverse denominator.
RecursionState build_recursion(const StokesParams& q, int N, StokesVariant variant = StokesVariant::Corrected,
                               int root = -1);
RecursionState build_recursion(const DerivedCoefficients& coeffs, int N,
                               StokesVariant variant = StokesVariant::Corrected, int root = -1);

// chi_n read off the power series of mu'/(2 mu) by direct division (independent of the recursion).
std::vector<cplx> chi_by_division(const StokesParams& q, int N);

struct SeriesOptions {
    double inner_cutoff = 1e-16;
    double convergence_tol = 1e-10;
    int convergence_window = 3;
    int divergence_run = 5;
    bool strict = false;  // throw SeriesDiverging instead of returning the optimal truncation
};

struct T1Result {
    cplx T1;
    bool converged = false;
    double tail_estimate = 0.0;
    int order_used = 0;          // last r included in T1
    int smallest_increment_at = 0;
    std::vector<cplx> partial_sums;
    std::vector<double> increments;
};

// Inner sum over n for a fixed r (the factor multiplying Delta_r^{(1)}).
cplx t1_inner_sum(const RecursionState& state, int r, double cutoff = 1e-16);

T1Result t1_series(const RecursionState& state, const SeriesOptions& opts = {});

// T1 from direct integration of the tau-plane equation: start from the recessive formal solution
// on arg tau = 0, continue through the lower-radius arc to arg tau = 3 pi / 2 and decompose.
struct NumericT1Options {
    double r_outer = 40.0;
    double r_inner = 10.0;
    double rel_tol = 1e-13;
    int formal_terms = 200;
};
struct NumericT1 {
    cplx T1;
    cplx v_coefficient;  // should equal 1
    double formal_error;
};
NumericT1 t1_numeric(const StokesParams& q, const NumericT1Options& opts = {});

enum class StokesMethod { Series, Numeric };
enum class PrefactorConvention { Corrected, Paper };  // |f|^2/(8 sqrt|gamma|) or |f|^2/(2 sqrt|gamma|)

struct StokesOptions {
    int N = 40;
    StokesVariant variant = StokesVariant::Corrected;
    StokesMethod method = StokesMethod::Series;
    PrefactorConvention prefactor = PrefactorConvention::Corrected;
    int root = -1;
    SeriesOptions series;
    NumericT1Options numeric;
};

struct StokesSet {
    std::array<cplx, 8> T{};
    std::array<cplx, 8> U{};
    double rho = 0.0;
    int truncation_order = 0;
    bool converged = false;
    double tail_estimate = 0.0;
    std::array<double, 4> eq23_residuals{};
    std::array<cplx, 4> base_t1{};  // T1 at Q, bar Q, bar^2 Q, bar^3 Q
    std::array<int, 4> root_index{};
};

// Relative residuals of the four identities among U_1..U_8.
std::array<double, 4> eq23_residuals(const std::array<cplx, 8>& U, double rho);

// U_{2k+1} = T_{2k+1} (4/(i|gamma|))^{-2 rho}, U_{2k} = T_{2k} (4/(i|gamma|))^{2 rho}.
std::array<cplx, 8> u_from_t(const std::array<cplx, 8>& T, double rho, double gamma);

// T_2..T_8 from T1 evaluated at Q, bar Q, bar^2 Q, bar^3 Q.
std::array<cplx, 8> chain_from_base(const std::array<cplx, 4>& base, double rho);

StokesSet stokes_set(const DerivedCoefficients& coeffs, const StokesOptions& opts = {});

struct StokesProbability {
    double p = 0.0;
    bool converged = false;
    StokesSet set;
};

// Final probability from the Stokes constants. Throws OutOfRangeProbability outside
// [-1e-6, 1 + 1e-6]; never clamps.
StokesProbability transition_probability_stokes(const ModelParams& params, const StokesOptions& opts = {});

double stokes_probability_from_set(const StokesSet& set, const ModelParams& params,
                                   PrefactorConvention prefactor);

}  // namespace nlcross
