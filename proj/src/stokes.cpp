#include "nlcross/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "nlcross/errors.hpp"
#include "nlcross/specfun.hpp"

namespace nlcross {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

cplx expi_pi(double x) { return std::polar(1.0, kPi * x); }

}  // namespace

StokesParams stokes_params(const DerivedCoefficients& c) {
    if (!c.has_gamma) throw Error(ErrorCode::DegenerateGamma, "Stokes constants need gamma != 0");
    return {c.Q1, c.Q2, c.Q3, c.Q4, c.rho};
}

StokesParams bar(const StokesParams& q) { return {-I * q.Q1, -q.Q2, I * q.Q3, q.Q4, -q.rho}; }

std::vector<cplx> formal_coefficients(const StokesParams& q, int eps, int count) {
    const double e = eps > 0 ? 1.0 : -1.0;
    const cplx rho = q.rho;
    std::vector<cplx> a(std::max(count, 1));
    a[0] = 1.0;
    for (int n = 1; n < count; ++n) {
        const cplx am1 = a[n - 1];
        const cplx am2 = n >= 2 ? a[n - 2] : cplx(0.0);
        const cplx k1 = -e * q.Q1 * double(n - 1) + 2.0 * rho * q.Q1 - e * q.Q1 * 0.5 - q.Q3;
        const cplx k2 = double(n - 2) * n / 4.0 - e * rho * double(n - 2) + rho * rho - e * rho - q.Q4;
        a[n] = (k1 * am1 + k2 * am2) / (e * n * 0.5);
    }
    return a;
}

FormalValue evaluate_formal(const StokesParams& q, int eps, const std::vector<cplx>& a, double r, double th) {
    const double e = eps > 0 ? 1.0 : -1.0;
    const cplx tau = std::polar(r, th);
    const cplx sq = std::polar(std::sqrt(r), 0.5 * th);
    const cplx log_tau(std::log(r), th);
    const cplx pre = std::exp(e * q.rho * log_tau + e * (0.5 * tau + 2.0 * q.Q1 * sq));
    cplx s = 0.0, ds = 0.0;
    double smallest = INFINITY;
    double prev1 = INFINITY, prev2 = INFINITY;
    int used = 0;
    cplx pw = 1.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const cplx t = a[n] * pw;
        const double at = std::abs(t);
        if (n > 5 && at > prev1 && at > prev2) break;
        smallest = std::min(smallest, at);
        s += t;
        ds += t * (-0.5 * double(n)) / tau;
        prev2 = prev1;
        prev1 = at;
        pw /= sq;
        ++used;
    }
    const cplx dpre = e * q.rho / tau + e * (0.5 + q.Q1 / sq);
    return {pre * s, pre * (dpre * s + ds), smallest, used};
}

std::vector<cplx> chi_by_division(const StokesParams& q, int N) {
    // mu'/(2 mu) in powers of s = tau^{-1/2}; chi_n multiplies s^{n+1}.
    const cplx mu1 = q.Q1, mu2 = q.rho, mu3 = q.Q3 - 2.0 * q.Q1 * cplx(q.rho);
    const int M = N + 2;
    std::vector<cplx> num(M + 1, 0.0), c(M + 1, 0.0);
    if (M >= 3) num[3] = -0.5 * mu1;
    if (M >= 4) num[4] = -mu2;
    if (M >= 5) num[5] = -1.5 * mu3;
    const std::array<cplx, 4> den = {1.0, 2.0 * mu1, 2.0 * mu2, 2.0 * mu3};
    for (int k = 0; k <= M; ++k) {
        cplx acc = num[k];
        for (int j = 1; j <= 3 && j <= k; ++j) acc -= den[j] * c[k - j];
        c[k] = acc;
    }
    std::vector<cplx> chi(N + 1, 0.0);
    for (int n = 1; n <= N; ++n) chi[n] = c[n + 1];
    return chi;
}

namespace {

std::vector<cplx> chi_verbatim(const cplx& mu1, const cplx& mu2, const cplx& mu3, int N) {
    std::vector<cplx> chi(N + 1, 0.0);
    const std::array<cplx, 4> mu = {0.0, mu1, mu2, mu3};
    for (int n = 1; n <= N; ++n) {
        if (n == 1) chi[n] = -0.25 * mu1;
        else if (n == 2) chi[n] = 0.25 * mu1 * mu1 - 0.5 * mu2;
        else if (n == 3) chi[n] = -0.25 * mu1 * mu1 * mu1 + 0.75 * mu1 * mu2 - 0.75 * mu3;
        else {
            cplx acc = 0.0;
            for (int m = 1; m <= 3; ++m) acc -= mu[m] * chi[n - m];
            chi[n] = acc;
        }
    }
    return chi;
}

double binomial(int n, int m) {
    double b = 1.0;
    for (int j = 1; j <= m; ++j) b = b * (n - m + j) / j;
    return b;
}

// c_{pm} (sign = +1 inside as (-1)^q) and d_{pm} ((-1)^{p-q}).
cplx cd_table_entry(int p, int m, bool d_table) {
    cplx acc = 0.0;
    for (int q = 0; q <= p; ++q) {
        const double sgn = d_table ? (((p - q) % 2) ? -1.0 : 1.0) : ((q % 2) ? -1.0 : 1.0);
        const double fact = std::exp(-std::lgamma(q + 1.0) - std::lgamma(p - q + 1.0));
        acc += sgn * fact * gamma_ratio({0.5 * q + 1.0}, {0.5 * q + 1.0 - m});
    }
    return acc;
}

}  // namespace

RecursionState build_recursion(const DerivedCoefficients& coeffs, int N, StokesVariant variant, int root) {
    return build_recursion(stokes_params(coeffs), N, variant, root);
}

RecursionState build_recursion(const StokesParams& q, int N, StokesVariant variant, int root) {
    if (N < 2) throw Error(ErrorCode::ConfigError, "recursion order must be >= 2");
    RecursionState st;
    st.q = q;
    st.variant = variant;
    st.order = N;
    st.mu1 = q.Q1;
    st.mu2 = q.rho;
    st.mu3 = q.Q3 - 2.0 * q.Q1 * cplx(q.rho);
    st.P[1] = st.mu2 * st.mu2 + 2.0 * q.Q1 * q.Q3 - 4.0 * q.Q1 * q.Q1 * st.mu2 - q.Q4;
    st.P[2] = 2.0 * st.mu2 * st.mu3;
    st.P[3] = st.mu3 * st.mu3;

    // v-series needs indices up to N + 1 for B_{p+1}.
    const int M = N + 2;
    const cplx disc = std::sqrt(1.0 - 4.0 * st.P[1]);
    const std::array<cplx, 2> roots = {0.5 * (1.0 + disc), 0.5 * (1.0 - disc)};
    auto min_den = [&](cplx v1) {
        double m = INFINITY;
        for (int n = 2; n <= M; ++n) m = std::min(m, std::abs(0.5 * (n + 1) - 2.0 * v1));
        return m;
    };
    if (root < 0) root = min_den(roots[0]) >= min_den(roots[1]) ? 0 : 1;
    st.root_index = root;
    st.v1 = roots[root];
    st.min_denominator = min_den(st.v1);
    if (st.min_denominator < 1e-8)
        throw Error(ErrorCode::NearSingularRecursion, "v_n recursion denominator vanishes");

    st.chi = variant == StokesVariant::Verbatim ? chi_verbatim(st.mu1, st.mu2, st.mu3, M) : chi_by_division(q, M);

    st.v.assign(M + 1, 0.0);
    st.v[1] = st.v1;
    st.v[2] = st.P[2] / (1.5 - 2.0 * st.v1);
    for (int n = 3; n <= M; ++n) {
        cplx acc = n <= 3 ? st.P[n] : cplx(0.0);
        for (int m = 2; m <= n - 1; ++m) acc += st.v[m] * st.v[n + 1 - m];
        st.v[n] = acc / (0.5 * (n + 1) - 2.0 * st.v1);
    }

    st.B.assign(M + 1, 0.0);
    st.B1.assign(M + 1, 0.0);
    st.B2.assign(M + 1, 0.0);
    for (int n = 1; n <= M; ++n) st.B[n] = st.chi[n] + st.v[n];
    for (int n = 1; n <= M; ++n) {
        cplx p1 = 0.0, p2 = 0.0;
        cplx pw1 = 1.0, pw2 = 1.0;
        double fact = 1.0;
        for (int m = 0; m <= n - 1; ++m) {
            if (m > 0) {
                pw1 *= 4.0 * st.mu3;
                pw2 *= -4.0 * st.mu3;
                fact *= m;
            }
            p1 += st.B[n - m] * pw1 / fact;
            p2 += st.B[n - m] * pw2 / fact;
        }
        st.B1[n] = p1;
        st.B2[n] = p2;
    }

    // Cached tables: c_{pm}, d_{pm}, gamma ratios, binomials.
    const int p_min = variant == StokesVariant::Verbatim ? 1 : 0;
    std::vector<std::vector<cplx>> ctab(N + 1, std::vector<cplx>(N + 1, 0.0)), dtab = ctab;
    for (int p = p_min; p <= N; ++p)
        for (int m = 0; m <= N; ++m) {
            ctab[p][m] = cd_table_entry(p, m, false);
            dtab[p][m] = cd_table_entry(p, m, true);
        }
    // g1[r][j] = Gamma(-2 mu2 - r/2) / Gamma(-2 mu2 - r/2 - j), g2 with +2 mu2.
    std::vector<std::vector<cplx>> g1(N + 1, std::vector<cplx>(N + 1)), g2 = g1;
    for (int r = 0; r <= N; ++r)
        for (int j = 0; j <= N; ++j) {
            const double x1 = -2.0 * q.rho - 0.5 * r;
            const double x2 = 2.0 * q.rho - 0.5 * r;
            g1[r][j] = gamma_ratio({x1}, {x1 - j});
            g2[r][j] = gamma_ratio({x2}, {x2 - j});
        }
    std::vector<cplx> pw4(2 * N + 2, 1.0);
    for (std::size_t k = 1; k < pw4.size(); ++k) pw4[k] = pw4[k - 1] * 4.0 * st.mu1;

    st.alpha1.assign(N + 3, 0.0);
    st.alpha2.assign(N + 3, 0.0);
    st.beta1.assign(N + 1, 0.0);
    st.beta2.assign(N + 1, 0.0);
    st.delta1.assign(N + 1, 0.0);
    st.delta2.assign(N + 1, 0.0);
    st.beta1[0] = st.beta2[0] = 1.0;

    auto alpha_sum = [&](int k, const std::vector<cplx>& delta, const std::vector<std::vector<cplx>>& g,
                         const std::vector<std::vector<cplx>>& tab) {
        cplx total = 0.0;
        for (int r = 0; r <= k; ++r) {
            const int s = k - r;
            cplx inner = 0.0;
            for (int n = (s + 1) / 2; n <= s; ++n) {
                const int p = 2 * n - s;
                if (p < p_min) continue;
                for (int m = p; m <= n; ++m)
                    inner += binomial(n, m) * g[r][n - m] * tab[p][m] * pw4[p];
            }
            total += delta[r] * inner;
        }
        return total;
    };

    for (int n = 0; n <= N; ++n) {
        if (n > 0) {
            cplx b1 = 0.0, b2 = 0.0;
            for (int p = 0; p <= n - 1; ++p) {
                const int qq = n - 1 - p;
                b1 += st.B2[p + 1] * st.alpha1[qq + 1];
                b2 += st.B1[p + 1] * st.alpha2[qq + 1];
            }
            st.beta1[n] = -2.0 / n * b1;
            st.beta2[n] = -2.0 / n * b2;
        }
        cplx d1 = 0.0, d2 = 0.0;
        for (int p = 0; p <= n; ++p) {
            d1 += st.B1[p + 1] * st.beta1[n - p];
            d2 += st.B2[p + 1] * st.beta2[n - p];
        }
        st.delta1[n] = d1;
        st.delta2[n] = d2;
        // alpha_{n+2} needs Delta_0..Delta_n.
        st.alpha1[n + 2] = -alpha_sum(n, st.delta1, g1, ctab);
        st.alpha2[n + 2] = alpha_sum(n, st.delta2, g2, dtab);
    }
    return st;
}

cplx t1_inner_sum(const RecursionState& st, int r, double cutoff) {
    const cplx x = -4.0 * st.mu1;
    const double mu2 = st.q.rho;
    cplx sum = 0.0;
    cplx pw = 1.0;  // x^n / n!
    int quiet = 0;
    const double ax = std::abs(x);
    for (int n = 0; n < 2000; ++n) {
        if (n > 0) pw *= x / double(n);
        const cplx term = pw * 2.0 * kPi * I * expi_pi(0.5 * (n - r) - 2.0 * mu2) *
                          rgamma(1.0 + 0.5 * (r - n) + 2.0 * mu2);
        sum += term;
        if (pw == cplx(0.0)) break;
        if (std::abs(term) <= cutoff * std::abs(sum) && n > 2.0 * ax * ax + 4) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
    }
    return sum;
}

T1Result t1_series(const RecursionState& st, const SeriesOptions& opts) {
    T1Result res;
    const int N = st.order;
    cplx S = 0.0;
    int good = 0;
    int growth = 0;
    for (int r = 0; r <= N; ++r) {
        const cplx inc = st.delta1[r] * t1_inner_sum(st, r, opts.inner_cutoff);
        S += inc;
        res.partial_sums.push_back(S);
        res.increments.push_back(std::abs(inc));
        if (r > 0 && std::abs(inc) / std::max(1.0, std::abs(S)) < opts.convergence_tol) {
            if (++good >= opts.convergence_window) {
                res.T1 = S;
                res.converged = true;
                res.tail_estimate = std::abs(inc);
                res.order_used = r;
                res.smallest_increment_at = r;
                return res;
            }
        } else {
            good = 0;
        }
        if (r > 0 && res.increments[r] > res.increments[r - 1]) ++growth;
        else growth = 0;
    }

    // Not converged: optimal truncation before the smallest increment (r >= 1).
    int r_min = 1;
    for (int r = 1; r <= N; ++r)
        if (res.increments[r] < res.increments[r_min]) r_min = r;
    res.smallest_increment_at = r_min;
    res.order_used = r_min - 1;
    res.T1 = res.partial_sums[r_min - 1];
    res.tail_estimate = res.increments[r_min];
    res.converged = false;
    if (opts.strict && growth >= opts.divergence_run)
        throw Error(ErrorCode::SeriesDiverging, "T1 series increments grow; smallest increment at r = " +
                                                    std::to_string(r_min));
    return res;
}

// ---------------------------------------------------------------------------
// Numerical T1 on the tau plane

namespace {

using State2 = std::array<cplx, 2>;

struct Segment {
    double r0, th0, r1, th1;
};

struct TauRhs {
    const StokesParams* q;
    Segment seg;
    void operator()(const State2& y, State2& dy, double s) const {
        const double r = seg.r0 + (seg.r1 - seg.r0) * s;
        const double th = seg.th0 + (seg.th1 - seg.th0) * s;
        const cplx tau = std::polar(r, th);
        const cplx dtau = (seg.r1 - seg.r0) * std::polar(1.0, th) + I * (seg.th1 - seg.th0) * tau;
        const std::array<cplx, 4> Q = {q->Q1, q->Q2, q->Q3, q->Q4};
        cplx qq = 0.25;
        for (int n = 1; n <= 4; ++n) qq += Q[n - 1] * std::polar(std::pow(r, -0.5 * n), -0.5 * n * th);
        dy[0] = y[1] * dtau;
        dy[1] = qq * y[0] * dtau;
    }
};

}  // namespace

NumericT1 t1_numeric(const StokesParams& q, const NumericT1Options& o) {
    namespace odeint = boost::numeric::odeint;
    const auto cu = formal_coefficients(q, +1, o.formal_terms);
    const auto cv = formal_coefficients(q, -1, o.formal_terms);
    const FormalValue start = evaluate_formal(q, -1, cv, o.r_outer, 0.0);

    std::vector<std::pair<double, double>> path = {{o.r_outer, 0.0}, {o.r_inner, 0.0}};
    for (int k = 1; k <= 12; ++k) path.push_back({o.r_inner, k * kPi / 8});
    path.push_back({o.r_outer, 1.5 * kPi});

    State2 y = {start.value, start.derivative};
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        TauRhs rhs{&q, {path[i].first, path[i].second, path[i + 1].first, path[i + 1].second}};
        auto stepper = odeint::make_controlled(o.rel_tol * 1e-3, o.rel_tol,
                                               odeint::runge_kutta_fehlberg78<State2, double, State2, double,
                                                                               odeint::array_algebra>());
        odeint::integrate_adaptive(stepper, rhs, y, 0.0, 1.0, 1e-3);
    }

    const FormalValue u = evaluate_formal(q, +1, cu, o.r_outer, 1.5 * kPi);
    const FormalValue v = evaluate_formal(q, -1, cv, o.r_outer, 1.5 * kPi);
    const cplx det = u.value * v.derivative - v.value * u.derivative;
    const cplx cu_coef = (y[0] * v.derivative - v.value * y[1]) / det;
    const cplx cv_coef = (u.value * y[1] - y[0] * u.derivative) / det;
    return {cu_coef / cv_coef, cv_coef,
            std::max({start.smallest_term, u.smallest_term, v.smallest_term})};
}

// ---------------------------------------------------------------------------

std::array<cplx, 8> chain_from_base(const std::array<cplx, 4>& t, double rho) {
    return {t[0],
            t[1] * expi_pi(2 * rho),
            t[2] * expi_pi(-4 * rho),
            t[3] * expi_pi(6 * rho),
            t[0] * expi_pi(-8 * rho),
            t[1] * expi_pi(10 * rho),
            t[2] * expi_pi(-12 * rho),
            t[3] * expi_pi(14 * rho)};
}

std::array<cplx, 8> u_from_t(const std::array<cplx, 8>& T, double rho, double gamma) {
    const cplx base = 4.0 / (I * std::abs(gamma));
    const cplx odd = std::pow(base, -2.0 * rho);  // principal log
    const cplx even = std::pow(base, 2.0 * rho);
    std::array<cplx, 8> U{};
    for (int k = 0; k < 8; ++k) U[k] = T[k] * ((k % 2 == 0) ? odd : even);  // k = 0 is U_1
    return U;
}

std::array<double, 4> eq23_residuals(const std::array<cplx, 8>& u, double rho) {
    const cplx U1 = u[0], U2 = u[1], U3 = u[2], U4 = u[3], U5 = u[4], U6 = u[5], U7 = u[6], U8 = u[7];
    const cplx em = expi_pi(-8 * rho), ep = expi_pi(8 * rho);
    auto rel = [](cplx l, cplx r) { return std::abs(l - r) / std::max({1.0, std::abs(l), std::abs(r)}); };
    return {rel(1.0 + U2 * U3, -(1.0 + U7 * U8 + U5 * (U6 + U8 + U6 * U7 * U8)) * em),
            rel(1.0 + U6 * U7, -(1.0 + U1 * U2 + U4 * (U1 + U3 + U1 * U2 * U3)) * em),
            rel(U1 + U3 + U1 * U2 * U3, (U5 + U7 + U5 * U6 * U7) * ep),
            rel(U2 + U4 + U2 * U3 * U4, (U6 + U8 + U6 * U7 * U8) * em)};
}

StokesSet stokes_set(const DerivedCoefficients& coeffs, const StokesOptions& opts) {
    StokesParams q = stokes_params(coeffs);
    StokesSet set;
    set.rho = q.rho;
    set.converged = true;
    for (int k = 0; k < 4; ++k) {
        if (opts.method == StokesMethod::Numeric) {
            const NumericT1 n = t1_numeric(q, opts.numeric);
            set.base_t1[k] = n.T1;
            set.tail_estimate = std::max(set.tail_estimate, n.formal_error);
            set.root_index[k] = -1;
        } else {
            const RecursionState st = build_recursion(q, opts.N, opts.variant, opts.root);
            const T1Result r = t1_series(st, opts.series);
            set.base_t1[k] = r.T1;
            set.converged = set.converged && r.converged;
            set.tail_estimate = std::max(set.tail_estimate, r.tail_estimate);
            set.truncation_order = std::max(set.truncation_order, r.order_used);
            set.root_index[k] = st.root_index;
        }
        q = bar(q);
    }
    set.T = chain_from_base(set.base_t1, set.rho);
    set.U = u_from_t(set.T, set.rho, coeffs.params.gamma);
    set.eq23_residuals = eq23_residuals(set.U, set.rho);
    return set;
}

double stokes_probability_from_set(const StokesSet& set, const ModelParams& p, PrefactorConvention pc) {
    const double f2 = p.f_abs * p.f_abs;
    const double pref = f2 / ((pc == PrefactorConvention::Paper ? 2.0 : 8.0) * std::sqrt(std::abs(p.gamma)));
    const auto& T = set.T;
    const cplx s = p.gamma > 0 ? T[0] + T[2] + T[0] * T[1] * T[2] : T[1] + T[3] + T[1] * T[2] * T[3];
    return pref * std::norm(s);
}

StokesProbability transition_probability_stokes(const ModelParams& params, const StokesOptions& opts) {
    const DerivedCoefficients c = derive_coefficients(params);
    if (!c.has_gamma) throw Error(ErrorCode::DegenerateGamma, "Stokes route needs gamma != 0");
    StokesProbability out;
    out.set = stokes_set(c, opts);
    out.converged = out.set.converged;
    out.p = stokes_probability_from_set(out.set, params, opts.prefactor);
    if (!(out.p >= -1e-6 && out.p <= 1.0 + 1e-6))
        throw Error(ErrorCode::OutOfRangeProbability,
                    "Stokes-route probability " + std::to_string(out.p) + " outside [0, 1]");
    return out;
}

}  // namespace nlcross
