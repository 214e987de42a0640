#include "nlcross/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "nlcross/errors.hpp"

namespace nlcross {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr cplx I{0.0, 1.0};

// C1, C2, and the running integral of |C1|^2 over the tail window.
using State = std::array<cplx, 3>;

struct Rhs {
    ModelParams p;
    const bool* accumulate;  // toggled between steps, never inside one

    void operator()(const State& y, State& dy, double t) const {
        const cplx e = std::polar(1.0, -p.phase_integral(t));
        dy[0] = -I * p.f_abs * e * y[1];
        dy[1] = -I * p.f_abs * std::conj(e) * y[0];
        dy[2] = *accumulate ? cplx(std::norm(y[0]), 0.0) : cplx(0.0, 0.0);
    }
};

double seed_ratio(const ModelParams& p, double t) {
    const double d = std::abs(p.detuning(t));
    if (p.f_abs == 0.0) return 0.0;
    if (d == 0.0) return INFINITY;
    return p.f_abs / d;
}

// Start of the last full beat period before t_end: Phi(t_end) - Phi(t_p) = 2 pi.
double tail_period_start(const ModelParams& p, double t_lo, double t_end) {
    const double target = 2.0 * std::numbers::pi;
    auto g = [&](double t) { return std::abs(p.phase_integral(t_end) - p.phase_integral(t)) - target; };
    // Phi is even in t, so the bracket must stay on the side of t_end.
    if (t_end <= 0.0) return t_lo;
    const double lo = std::max(t_lo, 0.0);
    if (g(lo) < 0.0) return t_lo;
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    auto r = boost::math::tools::toms748_solve(g, lo, t_end, tol, iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace

void IntegratorConfig::validate() const {
    if (!(t_start < t_end)) throw Error(ErrorCode::ConfigError, "t_start must be < t_end");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw Error(ErrorCode::ConfigError, "tolerances must be > 0");
    if (dense_output_grid.empty() && grid_points < 2)
        throw Error(ErrorCode::ConfigError, "grid_points must be >= 2");
    for (std::size_t i = 1; i < dense_output_grid.size(); ++i)
        if (!(dense_output_grid[i] > dense_output_grid[i - 1]))
            throw Error(ErrorCode::ConfigError, "dense output grid must be strictly increasing");
}

IntegratorConfig symmetric_window(double t_max, int grid_points) {
    IntegratorConfig c;
    c.t_start = -t_max;
    c.t_end = t_max;
    c.grid_points = grid_points;
    return c;
}

cplx c1_dot(const ModelParams& p, double t, cplx c2) {
    return -I * p.f_abs * std::polar(1.0, -p.phase_integral(t)) * c2;
}

AmplitudeSample seed_initial_state(const ModelParams& p, double t0, SeedConvention seed,
                                   double seed_ratio_max) {
    p.validate();
    if (!(t0 < 0.0)) throw Error(ErrorCode::ConfigError, "seed time must be negative");
    const double ratio = seed_ratio(p, t0);
    if (!(ratio < seed_ratio_max))
        throw Error(ErrorCode::SeedTooClose, "|f|/|Delta(t0)| = " + std::to_string(ratio) +
                                                 " exceeds the seed threshold");
    AmplitudeSample s;
    s.t = t0;
    if (p.f_abs == 0.0) return s;

    if (seed == SeedConvention::Adiabatic) {
        const double d = p.detuning(t0);
        const double dd = p.alpha + 3.0 * p.gamma * t0 * t0;
        const cplx shape = std::polar(1.0, -p.phase_integral(t0)) * cplx(1.0 / d, dd / (d * d * d));
        // |C1|^2 + |C2|^2 = 1 with C1 = f C2 shape and C2 real positive.
        const double c2 = 1.0 / std::sqrt(1.0 + p.f_abs * p.f_abs * std::norm(shape));
        s.c2 = c2;
        s.c1 = p.f_abs * c2 * shape;
        return s;
    }

    if (p.gamma == 0.0)
        throw Error(ErrorCode::DegenerateGamma, "the WKB seed convention needs gamma != 0");
    const double amp = 2.0 * p.f_abs / std::abs(p.gamma);
    s.c1 = amp / (t0 * t0 * t0) * std::polar(1.0, -2.0 * p.theta(t0));
    // Phase of C2 chosen so dC1/dt from the coupled equations has the WKB phase.
    s.c2 = (p.gamma > 0 ? 1.0 : -1.0) * std::sqrt(std::max(0.0, 1.0 - std::norm(s.c1)));
    return s;
}

Trajectory integrate(const ModelParams& p, const IntegratorConfig& cfg) {
    p.validate();
    cfg.validate();

    std::vector<double> grid = cfg.dense_output_grid;
    if (grid.empty()) {
        grid.resize(cfg.grid_points);
        const double h = (cfg.t_end - cfg.t_start) / (cfg.grid_points - 1);
        for (int i = 0; i < cfg.grid_points; ++i) grid[i] = cfg.t_start + h * i;
        grid.back() = cfg.t_end;
    }

    AmplitudeSample seed = seed_initial_state(p, cfg.t_start, cfg.seed, cfg.seed_ratio_max);
    const cplx phase = std::polar(1.0, cfg.seed_phase);

    Trajectory traj;
    traj.params = p;
    traj.t_end = cfg.t_end;
    traj.tail_start = tail_period_start(p, cfg.t_start, cfg.t_end);

    // Stops: every grid point inside the window, the tail start, and t_end.
    struct Stop {
        double t;
        bool record;
    };
    std::vector<Stop> stops;
    for (double g : grid)
        if (g > cfg.t_start && g <= cfg.t_end) stops.push_back({g, true});
    if (traj.tail_start > cfg.t_start) stops.push_back({traj.tail_start, false});
    stops.push_back({cfg.t_end, false});
    std::stable_sort(stops.begin(), stops.end(), [](const Stop& a, const Stop& b) { return a.t < b.t; });
    std::vector<Stop> merged;
    for (const Stop& s : stops) {
        if (!merged.empty() && merged.back().t == s.t)
            merged.back().record = merged.back().record || s.record;
        else
            merged.push_back(s);
    }

    State y{seed.c1 * phase, seed.c2 * phase, cplx(0.0, 0.0)};
    double t = cfg.t_start;
    if (!grid.empty() && grid.front() == cfg.t_start) traj.samples.push_back({t, y[0], y[1]});

    bool accumulate = false;
    Rhs rhs{p, &accumulate};
    auto stepper = odeint::make_controlled(cfg.abs_tol, cfg.rel_tol,
                                           odeint::runge_kutta_fehlberg78<State, double, State, double,
                                                                           odeint::array_algebra>());

    auto phase_cap = [&](double tt) {
        const double w = std::abs(p.alpha) * std::abs(tt) + std::abs(p.gamma) * std::abs(tt * tt * tt);
        double cap = w > 0.0 ? 0.5 / w : INFINITY;
        if (cfg.max_step > 0.0) cap = std::min(cap, cfg.max_step);
        return cap;
    };

    double dt = std::min(1e-3, phase_cap(t));
    const double dt_min = 1e-14 * std::max(1.0, std::abs(cfg.t_end - cfg.t_start));
    for (const Stop& stop : merged) {
        accumulate = t >= traj.tail_start;
        while (t < stop.t) {
            // The phase cap is evaluated at the end of the step with the larger |t|.
            double h = std::min(dt, std::min(phase_cap(t), phase_cap(std::min(stop.t, t + dt))));
            bool clipped = false;
            if (t + h >= stop.t) {
                h = stop.t - t;
                clipped = true;
            }
            double t_try = t;
            double h_try = h;
            auto res = stepper.try_step(rhs, y, t_try, h_try);
            if (res == odeint::success) {
                ++traj.steps_accepted;
                t = clipped ? stop.t : t_try;
                // After a clipped step keep the previous suggestion unless the controller shrank it.
                dt = clipped ? std::max(dt, h_try) : h_try;
            } else {
                ++traj.steps_rejected;
                dt = h_try;
                if (dt < dt_min)
                    throw Error(ErrorCode::StepSizeUnderflow,
                                "step size underflow at t = " + std::to_string(t));
            }
        }
        if (stop.record) traj.samples.push_back({t, y[0], y[1]});
    }

    for (const AmplitudeSample& s : traj.samples)
        traj.norm_drift_max = std::max(traj.norm_drift_max, s.norm_drift());
    const double width = cfg.t_end - traj.tail_start;
    traj.tail_average = width > 0.0 ? y[2].real() / width : std::norm(y[0]);
    return traj;
}

double final_probability(const Trajectory& tr, double seed_ratio_max) {
    const double t_end = tr.samples.empty() ? tr.t_end : std::max(tr.t_end, tr.samples.back().t);
    if (!(t_end > 0.0) || !(seed_ratio(tr.params, t_end) < seed_ratio_max))
        throw Error(ErrorCode::WindowTooShort, "window end too close to the crossing for a settled readout");
    if (tr.params.f_abs == 0.0) return 0.0;
    if (tr.tail_average >= 0.0) return tr.tail_average;

    // Trajectories assembled elsewhere: trapezoid over the recorded samples in the last period.
    const double t_p = tail_period_start(tr.params, tr.samples.front().t, t_end);
    double acc = 0.0, w = 0.0;
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        const auto& a = tr.samples[i - 1];
        const auto& b = tr.samples[i];
        if (a.t < t_p) continue;
        const double h = b.t - a.t;
        acc += 0.5 * h * (std::norm(a.c1) + std::norm(b.c1));
        w += h;
    }
    return w > 0.0 ? acc / w : std::norm(tr.samples.back().c1);
}

std::vector<W1Sample> trajectory_in_w1(const Trajectory& tr) {
    std::vector<W1Sample> out;
    const ModelParams& p = tr.params;
    for (const AmplitudeSample& s : tr.samples) {
        // x = t^2 covers t > 0 only; the sample at t = 0 is where the map is singular.
        if (!(s.t > 0.0)) continue;
        const auto [x, w1] = c1_to_w1(s.t, s.c1, p);
        // W1 = C1 x^{1/4} e^{i psi}, psi = (alpha x + gamma x^2/2)/4, dC1/dx = C1'(t)/(2t)
        const double psi_prime = 0.25 * (p.alpha + p.gamma * x);
        const cplx dc1dx = c1_dot(p, s.t, s.c2) / (2.0 * s.t);
        const cplx scale = std::sqrt(s.t) * std::polar(1.0, 0.25 * (p.alpha * x + 0.5 * p.gamma * x * x));
        const cplx wp = scale * (dc1dx + s.c1 * cplx(0.25 / x, psi_prime));
        out.push_back({x, w1, wp});
    }
    return out;
}

}  // namespace nlcross
