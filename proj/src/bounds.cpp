#include "nlcross/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlcross/errors.hpp"
#include "nlcross/specfun.hpp"

namespace nlcross {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kExpOverflow = 709.0;

// Coefficients of the frame the solution was built in (gamma > 0 after conjugation).
DerivedCoefficients work_frame(const PiecewiseSolution& sol) {
    const ModelParams p = sol.conjugated ? symmetry_map(sol.params) : sol.params;
    if (p.gamma == 0.0) throw Error(ErrorCode::DegenerateGamma, "error bounds need gamma != 0");
    return derive_coefficients(p);
}

// Adaptive Gauss-Kronrod with an absolute tolerance: a single 15-point panel is accepted when its
// error estimate is already below tol, otherwise the relative target is derived from that estimate.
// A value above cap is returned as is; the caller only needs to know it is that large.
double integrate_panel(const auto& f, double a, double b, double tol,
                       double cap = std::numeric_limits<double>::infinity()) {
    double err = 0.0;
    double v = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    if (std::isfinite(v) && err <= tol) return v;
    const double rel = std::max(1e-13, tol / std::max(std::abs(v), tol));
    v = gauss_kronrod<double, 15>::integrate(f, a, b, 15, rel, &err);
    if (v > cap) return v;
    if (!std::isfinite(v) || err > std::max(tol, 1e-8 * std::abs(v)))
        throw Error(ErrorCode::QuadratureFailure,
                    "quadrature error " + std::to_string(err) + " on [" + std::to_string(a) + ", " +
                        std::to_string(b) + "]");
    return v;
}

}  // namespace

GPerturbations g_perturbations(const DerivedCoefficients& c) {
    if (!c.has_gamma) throw Error(ErrorCode::DegenerateGamma, "perturbation terms need gamma != 0");
    const double a = c.params.alpha, g = c.params.gamma, f2 = c.params.f_abs * c.params.f_abs;
    GPerturbations out;
    out.lambda = c.lambda_scale;
    const cplx l2 = out.lambda * out.lambda;
    out.g1_I = cplx(0.25 * f2, -0.125 * a);
    out.g1_II = a * g / (8.0 * l2);
    out.g2_II = g * g / (16.0 * l2);
    return out;
}

double region1_bound_coefficient(double m, double gamma) {
    if (!(m > 0.25 && m < 1.25)) throw Error(ErrorCode::MOutOfRange, "m must lie in (1/4, 5/4)");
    if (!(gamma > 0.0))
        throw Error(ErrorCode::DegenerateGamma, "bound coefficient needs gamma > 0; map gamma < 0 by conjugation");
    return (3.0 / ((m - 0.25) * (m + 1.25)) + 4.0 / (m + 0.5)) / gamma;
}

BoundModel::BoundModel(const PiecewiseSolution& sol, const BoundOptions& opts)
    : sol_(sol), opts_(opts), coeffs_(work_frame(sol)), g_(g_perturbations(coeffs_)) {
    x_max_ = opts.x_max > 0.0 ? opts.x_max : sol.x_ref_max;
    if (!(x_max_ > 0.0)) throw Error(ErrorCode::ConfigError, "region-I supremum needs a positive x_max");
    region1_bound_coefficient(opts.m, coeffs_.params.gamma);  // validates m
    const int n = std::max(2, opts.sup_points);
    const double lo = 1e-3 * x_max_;
    grid_.resize(n);
    suffix_sup_.resize(n);
    for (int i = 0; i < n; ++i) grid_[i] = i + 1 == n ? x_max_ : lo * std::pow(x_max_ / lo, double(i) / (n - 1));
    double run = 0.0;
    for (int i = n - 1; i >= 0; --i) suffix_sup_[i] = run = std::max(run, majorant1(grid_[i]));
}

// y^m (|c1 U| + |c2 V|): majorises y^m |W1| and stays smooth where the combination beats.
double BoundModel::majorant1(double y) const {
    const PcfBasis b = pcf_basis(coeffs_.a_pcf, xi_region1(y, coeffs_));
    return std::pow(y, opts_.m) *
           (std::abs(sol_.region1.c1) * std::abs(b.u.value) + std::abs(sol_.region1.c2) * std::abs(b.v.value));
}

double BoundModel::region1_sup(double x) const {
    if (!(x < x_max_)) return 0.0;
    double sup = majorant1(x);
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    if (it != grid_.end()) sup = std::max(sup, suffix_sup_[it - grid_.begin()]);
    return opts_.sup_safety * sup;
}

double BoundModel::region1_exponent(double x) const {
    if (!(x > 0.0)) throw Error(ErrorCode::ZeroTime, "region-I bound needs x > 0");
    return region1_bound_coefficient(opts_.m, coeffs_.params.gamma) * (std::abs(g_.g1_I) / x + g_.g2_I / (x * x));
}

double BoundModel::region1_bound(double x) const {
    return std::pow(x, -opts_.m) * region1_sup(x) * std::expm1(region1_exponent(x));
}

double BoundModel::region2_sup(double x) const {
    const int n = std::max(2, opts_.sup_points);
    double sup = 0.0;
    for (int i = 1; i <= n; ++i)
        sup = std::max(sup, std::abs(evaluate_region(sol_.region2, x * i / n, coeffs_).value));
    return opts_.sup_safety * sup;
}

double BoundModel::region2_integral(double x) const {
    if (x < 0.0) throw Error(ErrorCode::ZeroTime, "region-II error integral needs x >= 0");
    if (x == 0.0) return 0.0;
    const cplx lam = coeffs_.lambda_scale;
    const double mu = coeffs_.mu_whittaker;
    const cplx mpx = whittaker_m(coeffs_.kappa, mu, lam * x).value;
    const cplx mmx = whittaker_m(coeffs_.kappa, -mu, lam * x).value;
    auto integrand = [&](double y) {
        const cplx mp = whittaker_m(coeffs_.kappa, mu, lam * y).value;
        const cplx mm = whittaker_m(coeffs_.kappa, -mu, lam * y).value;
        const cplx k = 2.0 * lam * (-mpx * mm + mmx * mp);
        return std::abs(k * (g_.g1_II * y + g_.g2_II * y * y));
    };
    // Panels no wider than 1/|lambda| away from 0, and a geometric ladder towards y = 0 where the
    // integrand is only Hoelder continuous.
    const double h = std::min(1.0, 1.0 / std::abs(lam));
    std::vector<double> cuts{x};
    while (cuts.back() > h) cuts.push_back(std::max(h, cuts.back() - h));
    for (int k = 0; k < 40 && cuts.back() > x * 1e-12; ++k) cuts.push_back(0.5 * cuts.back());
    cuts.push_back(0.0);
    // The kernel carries |M(lambda x)|, which grows exponentially in x; the tolerance follows it.
    const double tol = opts_.quad_tol * std::max(1.0, std::abs(lam) * (std::abs(mpx) + std::abs(mmx)));
    // Summed upwards from 0; past log(DBL_MAX) the bound overflows anyway, so report +inf.
    double total = 0.0;
    for (std::size_t i = cuts.size() - 1; i > 0; --i) {
        total += integrate_panel(integrand, cuts[i], cuts[i - 1], tol, kExpOverflow);
        if (total > kExpOverflow) return std::numeric_limits<double>::infinity();
    }
    return total;
}

double BoundModel::region2_bound(double x) const {
    if (x == 0.0) return 0.0;
    return region2_sup(x) * std::expm1(region2_integral(x));
}

double region1_error_bound(double x, const PiecewiseSolution& sol, const BoundOptions& opts) {
    return BoundModel(sol, opts).region1_bound(x);
}

double region2_error_integral(double x, const PiecewiseSolution& sol, const BoundOptions& opts) {
    return BoundModel(sol, opts).region2_integral(x);
}

double region2_error_bound(double x, const PiecewiseSolution& sol, const BoundOptions& opts) {
    return BoundModel(sol, opts).region2_bound(x);
}

BoundReport bound_report(double x, const BoundModel& model, const std::vector<W1Sample>& reference) {
    if (reference.empty()) throw Error(ErrorCode::ConfigError, "empty reference");
    auto it = std::min_element(reference.begin(), reference.end(), [x](const W1Sample& a, const W1Sample& b) {
        return std::abs(a.x - x) < std::abs(b.x - x);
    });
    BoundReport r;
    r.x = it->x;
    r.sup_M1 = model.region1_sup(r.x);
    r.error_integral1 = model.region1_exponent(r.x);
    r.bound_region1 = model.region1_bound(r.x);
    // The region-II bound only applies below the transition point; it stays 0 elsewhere.
    if (r.x < model.solution().x_star) {
        r.sup_M2 = model.region2_sup(r.x);
        r.error_integral2 = model.region2_integral(r.x);
        r.bound_region2 = r.sup_M2 * std::expm1(r.error_integral2);
    }
    r.observed_error = std::abs(it->w1 - evaluate_piecewise(model.solution(), r.x).w1);
    return r;
}

double bound_crossing_point(const BoundModel& model, double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo)) throw Error(ErrorCode::ConfigError, "invalid crossing interval");
    auto diff = [&](double x) { return model.region1_bound(x) - model.region2_bound(x); };
    double flo = diff(lo);
    const double fhi = diff(hi);
    if (!(flo * fhi <= 0.0))
        throw Error(ErrorCode::NoSignChange, std::string("bounds do not cross: eps_I - eps_II is ") +
                                                 (flo > 0 ? "positive" : "negative") + " at both ends");
    while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        const double fm = diff(mid);
        if ((fm <= 0.0) == (flo <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<std::pair<double, double>> unmodified_region1_integral(double x, const PiecewiseSolution& sol,
                                                                   const std::vector<double>& upper_limits,
                                                                   const BoundOptions& opts) {
    if (!(x > 0.0)) throw Error(ErrorCode::ZeroTime, "region-I integral needs x > 0");
    const DerivedCoefficients c = work_frame(sol);
    const GPerturbations g = g_perturbations(c);
    const cplx s = c.sqrt_i_gamma_half;
    const cplx pref = s * std::sqrt(2.0 * std::numbers::pi) * cplx(0.0, 1.0) / c.params.gamma;
    const PcfBasis bx = pcf_basis(c.a_pcf, xi_region1(x, c));
    auto integrand = [&](double y) {
        const PcfBasis by = pcf_basis(c.a_pcf, xi_region1(y, c));
        const cplx k = pref * (-bx.u.value * by.v.value + bx.v.value * by.u.value);
        return std::abs(k) * std::abs(g.g1_I / y + g.g2_I / (y * y));
    };
    std::vector<double> limits = upper_limits;
    std::sort(limits.begin(), limits.end());
    std::vector<std::pair<double, double>> out;
    double acc = 0.0, a = x;
    for (double X : limits) {
        if (!(X > x)) {
            out.emplace_back(X, 0.0);
            continue;
        }
        // Panels no wider than a quarter of the local beat period 8 pi / (gamma y).
        while (a < X) {
            const double b = std::min(X, a + std::min(1.0, 2.0 * std::numbers::pi / (c.params.gamma * a)));
            acc += integrate_panel(integrand, a, b, opts.quad_tol);
            a = b;
        }
        out.emplace_back(X, acc);
    }
    return out;
}

}  // namespace nlcross
