#include <doctest.h>

#include <cmath>

#include "nlcross/errors.hpp"
#include "nlcross/ode.hpp"

using namespace nlcross;

namespace {

double probability(const ModelParams& p, double t_max = 20.0, int points = 2001) {
    return final_probability(integrate(p, symmetric_window(t_max, points)));
}

// scipy DOP853 (rtol 3e-14) on [-T, T] with the two-term adiabatic tail removed at both ends,
// T = 6, 8, 10, 12, extrapolated with the observed T^-6 window error.
constexpr double kUnitProbability = 0.99216583;

}  // namespace

TEST_CASE("seed amplitudes") {
    const AmplitudeSample zero = seed_initial_state({1.0, 1.0, 0.0}, -20.0);
    CHECK(zero.c1 == cplx(0.0, 0.0));
    CHECK(zero.c2 == cplx(1.0, 0.0));

    // Literal boundary amplitude 2|f|/gamma |t0|^-3.
    const AmplitudeSample wkb = seed_initial_state({1.0, 1.0, 1.0}, -20.0, SeedConvention::PaperWkb);
    CHECK(std::abs(wkb.c1) == doctest::Approx(2.5e-4).epsilon(1e-14));
    CHECK(wkb.norm_drift() < 1e-15);

    // Default: leading adiabatic tail |f| / |Delta(t0)|.
    const AmplitudeSample ad = seed_initial_state({1.0, 1.0, 1.0}, -20.0);
    CHECK(std::abs(ad.c1) == doctest::Approx(1.0 / 8020.0).epsilon(1e-6));
    CHECK(ad.norm_drift() < 1e-15);

    try {
        seed_initial_state({1.0, 1.0, 1.0}, -2.0);
        FAIL("expected SeedTooClose");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SeedTooClose);
    }
}

TEST_CASE("zero coupling never populates state 1") {
    const Trajectory tr = integrate({1.0, 1.0, 0.0}, symmetric_window(20.0, 401));
    for (const AmplitudeSample& s : tr.samples) CHECK(s.c1 == cplx(0.0, 0.0));
    CHECK(final_probability(tr) == 0.0);
}

TEST_CASE("samples are strictly increasing and normalised") {
    for (double g : {4.0, 2.0, 1.0, 0.5}) {
        const Trajectory tr = integrate({1.0, g, 1.0}, symmetric_window(20.0, 4001));
        CHECK(tr.samples.size() == 4001);
        for (std::size_t i = 1; i < tr.samples.size(); ++i) REQUIRE(tr.samples[i].t > tr.samples[i - 1].t);
        CHECK(tr.norm_drift_max < 1e-8);
    }
}

TEST_CASE("unit parameter set against an independent integrator") {
    CHECK(std::abs(probability({1.0, 1.0, 1.0}) - kUnitProbability) < 1e-6);
}

TEST_CASE("window stability") {
    const double p20 = probability({1.0, 1.0, 1.0}, 20.0);
    const double p30 = probability({1.0, 1.0, 1.0}, 30.0, 3001);
    CHECK(std::abs(p20 - p30) < 1e-4);
}

TEST_CASE("time rescaling and conjugation") {
    const double p = probability({1.0, 1.0, 1.0});
    CHECK(std::abs(p - probability({4.0, 16.0, 2.0}, 10.0)) < 1e-6);
    CHECK(std::abs(p - probability({-1.0, -1.0, 1.0})) < 1e-8);
}

TEST_CASE("global phase of the seed is irrelevant") {
    IntegratorConfig a = symmetric_window(20.0, 401), b = a;
    b.seed_phase = 1.234;
    const double pa = final_probability(integrate({1.0, 2.0, 1.0}, a));
    const double pb = final_probability(integrate({1.0, 2.0, 1.0}, b));
    CHECK(std::abs(pa - pb) < 1e-12);
}

TEST_CASE("Landau-Zener limit") {
    const double p = probability({1.0, 0.01, 1.0}, 60.0, 601);
    const double lz = 1.0 - std::exp(-2.0 * M_PI);
    CHECK(std::abs(p - lz) <= 0.02 * lz);
}

TEST_CASE("second-order equation for C1 holds on the dense output") {
    const ModelParams p{1.0, 1.0, 1.0};
    IntegratorConfig cfg = symmetric_window(20.0);
    const double h = 1e-3;
    for (int k = -1500; k <= 1500; ++k) cfg.dense_output_grid.push_back(k * h);
    cfg.dense_output_grid.insert(cfg.dense_output_grid.begin(), -20.0);
    cfg.dense_output_grid.push_back(20.0);
    cfg.rel_tol = 1e-13;
    cfg.abs_tol = 1e-15;
    const Trajectory tr = integrate(p, cfg);
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < tr.samples.size(); i += 50) {
        const auto& s = tr.samples;
        if (std::abs(s[i].t) > 1.4) continue;
        // Five-point stencils.
        const cplx d1 = (-s[i + 2].c1 + 8.0 * s[i + 1].c1 - 8.0 * s[i - 1].c1 + s[i - 2].c1) / (12 * h);
        const cplx d2 =
            (-s[i + 2].c1 + 16.0 * s[i + 1].c1 - 30.0 * s[i].c1 + 16.0 * s[i - 1].c1 - s[i - 2].c1) / (12 * h * h);
        const cplx res = d2 + cplx(0, 1) * p.detuning(s[i].t) * d1 + p.f_abs * p.f_abs * s[i].c1;
        worst = std::max(worst, std::abs(res) / std::max(1.0, std::abs(d2)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("W1 samples from a trajectory") {
    const ModelParams p{1.0, 1.0, 1.0};
    IntegratorConfig cfg = symmetric_window(20.0);
    const double h = 1e-4;
    for (double t0 : {0.5, 1.5, 3.0})
        for (int k = -1; k <= 1; ++k) cfg.dense_output_grid.push_back(t0 + k * h);
    cfg.dense_output_grid.push_back(20.0);
    const Trajectory tr = integrate(p, cfg);
    const std::vector<W1Sample> w = trajectory_in_w1(tr);
    REQUIRE(w.size() == 10);
    for (std::size_t i = 0; i < 9; ++i) {
        const AmplitudeSample& s = tr.samples[i];
        CHECK(w[i].x == s.t * s.t);
        CHECK(std::abs(std::abs(w[i].w1) - std::abs(s.c1) * std::sqrt(s.t)) < 1e-14);
    }
    for (std::size_t i = 1; i < 9; i += 3) {
        const cplx fd = (w[i + 1].w1 - w[i - 1].w1) / (w[i + 1].x - w[i - 1].x);
        CHECK(std::abs(fd - w[i].w1_prime) < 1e-6 * std::max(1.0, std::abs(w[i].w1_prime)));
    }
}

TEST_CASE("trajectory_in_w1 skips t <= 0") {
    const Trajectory tr = integrate({1.0, 1.0, 1.0}, symmetric_window(20.0, 5));
    const std::vector<W1Sample> w = trajectory_in_w1(tr);
    CHECK(w.size() == 2);  // t = 10, 20
    for (const W1Sample& s : w) CHECK(s.x > 0.0);
}

TEST_CASE("final probability needs a settled window") {
    IntegratorConfig cfg = symmetric_window(20.0, 11);
    cfg.t_end = 1.0;
    const Trajectory tr = integrate({1.0, 1.0, 1.0}, cfg);
    try {
        final_probability(tr);
        FAIL("expected WindowTooShort");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WindowTooShort);
    }
}

TEST_CASE("configuration errors") {
    IntegratorConfig cfg = symmetric_window(20.0);
    cfg.t_end = -30.0;
    CHECK_THROWS_AS(integrate({1.0, 1.0, 1.0}, cfg), Error);
    cfg = symmetric_window(20.0);
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(integrate({1.0, 1.0, 1.0}, cfg), Error);
}
