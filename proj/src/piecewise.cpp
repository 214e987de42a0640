#include "nlcross/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "nlcross/errors.hpp"
#include "nlcross/specfun.hpp"

namespace nlcross {

namespace {

constexpr double kMaxCondition = 1e12;

struct Solve2 {
    cplx x1, x2;
    double cond;
};

// [a b; c d] [x1; x2] = [r1; r2] by Cramer's rule, with the 2-norm condition number.
Solve2 solve2(cplx a, cplx b, cplx c, cplx d, cplx r1, cplx r2) {
    const cplx det = a * d - b * c;
    const double tr = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    const double dd = std::norm(det);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * dd));
    const double s_max = 0.5 * (tr + disc);
    // s_min = dd / s_max avoids cancellation in (tr - disc).
    const double s_min = s_max > 0.0 ? dd / s_max : 0.0;
    const double cond = s_min > 0.0 ? std::sqrt(s_max / s_min) : std::numeric_limits<double>::infinity();
    if (!(s_min > 0.0)) return {0.0, 0.0, cond};
    return {(r1 * d - b * r2) / det, (a * r2 - c * r1) / det, cond};
}

DerivedCoefficients checked(const ModelParams& p) {
    if (p.gamma == 0.0) throw Error(ErrorCode::DegenerateGamma, "piecewise approximation needs gamma != 0");
    return derive_coefficients(p);
}

}  // namespace

cplx xi_region1(double x, const DerivedCoefficients& c) {
    const ModelParams& p = c.params;
    return c.sqrt_i_gamma_half * (x + p.alpha / p.gamma);
}

cplx xi_region2(double x, const DerivedCoefficients& c) { return c.lambda_scale * x; }

RegionBasis region_basis(Region region, double x, const DerivedCoefficients& c) {
    if (region == Region::I) {
        const cplx s = c.sqrt_i_gamma_half;
        const PcfBasis b = pcf_basis(c.a_pcf, xi_region1(x, c));
        return {b.u.value, s * b.du.value, b.v.value, s * b.dv.value};
    }
    const cplx s = c.lambda_scale;
    const WhittakerBasis b = whittaker_basis(c.kappa, c.mu_whittaker, xi_region2(x, c));
    return {b.m_plus.value, s * b.dm_plus.value, b.m_minus.value, s * b.dm_minus.value};
}

RegionValue evaluate_region(const RegionCoefficients& rc, double x, const DerivedCoefficients& c) {
    const RegionBasis b = region_basis(rc.region, x, c);
    return {rc.c1 * b.f1 + rc.c2 * b.f2, rc.c1 * b.df1 + rc.c2 * b.df2};
}

RegionCoefficients fit_region1(const std::vector<W1Sample>& ref, double x0, const DerivedCoefficients& c) {
    if (ref.empty()) throw Error(ErrorCode::IllConditionedFit, "empty reference");
    if (x0 < ref.front().x || x0 > ref.back().x)
        throw Error(ErrorCode::IllConditionedFit, "x0 outside the sampled range");
    auto it = std::min_element(ref.begin(), ref.end(), [x0](const W1Sample& a, const W1Sample& b) {
        return std::abs(a.x - x0) < std::abs(b.x - x0);
    });
    const RegionBasis b = region_basis(Region::I, it->x, c);
    const Solve2 s = solve2(b.f1, b.f2, b.df1, b.df2, it->w1, it->w1_prime);
    if (!(s.cond <= kMaxCondition))
        throw Error(ErrorCode::IllConditionedFit, "region-I fit condition number " + std::to_string(s.cond));
    return {s.x1, s.x2, Region::I};
}

RegionCoefficients match_at(double x_star, const RegionCoefficients& r1, const DerivedCoefficients& c) {
    if (!(x_star > 0.0)) throw Error(ErrorCode::IllConditionedMatch, "transition point must be positive");
    const RegionValue v = evaluate_region(r1, x_star, c);
    const RegionBasis b = region_basis(Region::II, x_star, c);
    const Solve2 s = solve2(b.f1, b.f2, b.df1, b.df2, v.value, v.derivative);
    if (!(s.cond <= kMaxCondition))
        throw Error(ErrorCode::IllConditionedMatch, "matching condition number " + std::to_string(s.cond));
    return {s.x1, s.x2, Region::II};
}

double max_error(double x_star, const RegionCoefficients& r1, const DerivedCoefficients& c,
                 const std::vector<W1Sample>& ref) {
    const RegionCoefficients r2 = match_at(x_star, r1, c);
    double e = 0.0;
    for (const W1Sample& s : ref) {
        if (!(s.x > 0.0) || !(s.x < x_star)) continue;
        e = std::max(e, std::abs(s.w1 - evaluate_region(r2, s.x, c).value));
    }
    return e;
}

TransitionPoint optimize_transition_point(const RegionCoefficients& r1, const DerivedCoefficients& c,
                                          const std::vector<W1Sample>& ref, double x0_fit,
                                          const TransitionSearch& search) {
    if (search.points < 2 || !(search.lo_fraction > 0.0) || !(search.hi_fraction > search.lo_fraction) ||
        !(search.hi_fraction < 1.0))
        throw Error(ErrorCode::ConfigError, "invalid transition-point search grid");

    TransitionPoint out;
    // A candidate whose matching system is ill-conditioned cannot be the minimiser; it scores +inf.
    auto score = [&](double x) {
        try {
            return max_error(x, r1, c, ref);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::IllConditionedMatch) throw;
            return std::numeric_limits<double>::infinity();
        }
    };
    auto evaluate_all = [&](const std::vector<double>& xs) {
        std::vector<double> es(xs.size());
        const int jobs = std::max(1, std::min<int>(search.jobs, static_cast<int>(xs.size())));
        if (jobs == 1) {
            for (std::size_t i = 0; i < xs.size(); ++i) es[i] = score(xs[i]);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errs(jobs);
            for (int j = 0; j < jobs; ++j)
                pool.emplace_back([&, j] {
                    try {
                        for (std::size_t i = j; i < xs.size(); i += jobs) es[i] = score(xs[i]);
                    } catch (...) {
                        errs[j] = std::current_exception();
                    }
                });
            for (auto& th : pool) th.join();
            for (auto& e : errs)
                if (e) std::rethrow_exception(e);
        }
        for (std::size_t i = 0; i < xs.size(); ++i) out.evaluated.emplace_back(xs[i], es[i]);
        return es;
    };

    std::vector<double> xs(search.points);
    const double lo = search.lo_fraction * x0_fit, hi = search.hi_fraction * x0_fit;
    const double ratio = std::pow(hi / lo, 1.0 / (search.points - 1));
    for (int i = 0; i < search.points; ++i) xs[i] = lo * std::pow(ratio, i);
    xs.back() = hi;
    std::vector<double> es = evaluate_all(xs);
    std::size_t k = std::min_element(es.begin(), es.end()) - es.begin();
    double best_x = xs[k], best_e = es[k];
    if (!std::isfinite(best_e))
        throw Error(ErrorCode::IllConditionedMatch, "no transition-point candidate admits a stable match");
    double left = k > 0 ? xs[k - 1] : xs[k], right = k + 1 < xs.size() ? xs[k + 1] : xs[k];

    // Subdivide the bracket between the neighbours of the current minimum.
    for (int round = 0; round < search.refine_rounds; ++round) {
        const int n = std::max(3, search.refine_points);
        std::vector<double> cand;
        for (int i = 0; i < n; ++i) {
            const double xi = left + (right - left) * i / (n - 1);
            if (xi != best_x) cand.push_back(xi);
        }
        const std::vector<double> ce = evaluate_all(cand);
        for (std::size_t i = 0; i < cand.size(); ++i)
            if (ce[i] < best_e) best_e = ce[i], best_x = cand[i];
        const double step = (right - left) / (n - 1);
        left = std::max(left, best_x - step);
        right = std::min(right, best_x + step);
    }
    out.x_bar_star = best_x;
    out.e_min = best_e;
    return out;
}

PiecewiseSolution build_piecewise(const ModelParams& params, const std::vector<W1Sample>& reference,
                                  const PiecewiseOptions& opts) {
    PiecewiseSolution sol;
    sol.params = params;
    double x_max = 0.0;
    for (const W1Sample& s : reference) x_max = std::max(x_max, s.x);
    sol.x_ref_max = x_max;
    sol.x0_fit = opts.x0_fit > 0.0 ? opts.x0_fit : 0.9 * x_max;
    sol.conjugated = params.gamma < 0.0;
    const ModelParams work = sol.conjugated ? symmetry_map(params) : params;
    const DerivedCoefficients c = checked(work);

    std::vector<W1Sample> ref = reference;
    if (sol.conjugated)
        for (W1Sample& s : ref) s.w1 = std::conj(s.w1), s.w1_prime = std::conj(s.w1_prime);

    sol.region1 = fit_region1(ref, sol.x0_fit, c);
    const TransitionPoint tp = optimize_transition_point(sol.region1, c, ref, sol.x0_fit, opts.search);
    sol.x_star = tp.x_bar_star;
    sol.max_error_at_star = tp.e_min;
    sol.region2 = match_at(sol.x_star, sol.region1, c);
    return sol;
}

PiecewiseValue evaluate_piecewise(const PiecewiseSolution& sol, double x) {
    const ModelParams work = sol.conjugated ? symmetry_map(sol.params) : sol.params;
    const DerivedCoefficients c = checked(work);
    const RegionCoefficients& rc = x < sol.x_star ? sol.region2 : sol.region1;
    RegionValue v = evaluate_region(rc, x, c);
    if (sol.conjugated) v.value = std::conj(v.value), v.derivative = std::conj(v.derivative);
    return {v.value, v.derivative, rc.region};
}

std::vector<std::pair<double, double>> population_curve(const PiecewiseSolution& sol,
                                                        const std::vector<double>& t_grid) {
    std::vector<std::pair<double, double>> out;
    out.reserve(t_grid.size());
    const bool zero = sol.region1.c1 == 0.0 && sol.region1.c2 == 0.0;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw Error(ErrorCode::ZeroTime, "population curve needs t > 0");
        out.emplace_back(t, zero ? 0.0 : std::norm(evaluate_piecewise(sol, t * t).w1) / t);
    }
    return out;
}

Trajectory reference_trajectory(const ModelParams& params, double x0, const ReferenceOptions& opts) {
    if (!(opts.t_max > 0.0) || opts.grid_points < 3 || !(x0 > 0.0) || x0 > opts.t_max * opts.t_max)
        throw Error(ErrorCode::ConfigError, "invalid reference grid");
    IntegratorConfig cfg = symmetric_window(opts.t_max, opts.grid_points);
    cfg.rel_tol = opts.rel_tol;
    cfg.abs_tol = opts.abs_tol;
    cfg.seed = opts.seed;
    std::vector<double> grid(opts.grid_points);
    const double h = 2.0 * opts.t_max / (opts.grid_points - 1);
    for (int i = 0; i < opts.grid_points; ++i) grid[i] = -opts.t_max + h * i;
    grid.back() = opts.t_max;
    grid.push_back(std::sqrt(x0));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    cfg.dense_output_grid = std::move(grid);
    return integrate(params, cfg);
}

}  // namespace nlcross
