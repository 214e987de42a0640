#include <doctest.h>

#include <cmath>

#include "nlcross/bounds.hpp"
#include "nlcross/errors.hpp"

using namespace nlcross;

namespace {

struct Fixture {
    std::vector<W1Sample> w1;
    PiecewiseSolution solution;
};

const Fixture& unit_fixture() {
    static const Fixture f = [] {
        const ModelParams p{1.0, 1.0, 1.0};
        Fixture out;
        out.w1 = trajectory_in_w1(reference_trajectory(p, 360.0));
        out.solution = build_piecewise(p, out.w1);
        return out;
    }();
    return f;
}

}  // namespace

TEST_CASE("region-I bound coefficient") {
    // 3 / ((1/2)(2)) + 4 / (5/4)
    CHECK(region1_bound_coefficient(0.75, 1.0) == doctest::Approx(6.2).epsilon(1e-15));
    CHECK(region1_bound_coefficient(0.75, 2.0) == doctest::Approx(3.1).epsilon(1e-15));
    CHECK(region1_bound_coefficient(0.5, 1.0) == doctest::Approx(3.0 / (0.25 * 1.75) + 4.0).epsilon(1e-15));
    for (double m : {0.25, 1.25, 0.0, 2.0}) {
        try {
            region1_bound_coefficient(m, 1.0);
            FAIL("expected MOutOfRange");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MOutOfRange);
        }
    }
    CHECK_THROWS_AS(region1_bound_coefficient(0.75, -1.0), Error);
}

TEST_CASE("neglected perturbation terms") {
    const GPerturbations g = g_perturbations(derive_coefficients({1.0, 1.0, 1.0}));
    CHECK(std::abs(g.g1_I - cplx(0.25, -0.125)) < 1e-16);
    CHECK(g.g2_I == 0.1875);
    // lambda^2 = 3i/2 - 1/4
    const cplx l2(-0.25, 1.5);
    CHECK(std::abs(g.g1_II - 1.0 / (8.0 * l2)) < 1e-15);
    CHECK(std::abs(g.g2_II - 1.0 / (16.0 * l2)) < 1e-15);
    CHECK(g_perturbations(derive_coefficients({0.0, 2.0, 1.0})).g1_II == cplx(0.0, 0.0));
    CHECK_THROWS_AS(g_perturbations(derive_coefficients({1.0, 0.0, 1.0})), Error);
}

TEST_CASE("region-II error integral starts at zero and grows") {
    const BoundModel model(unit_fixture().solution);
    CHECK(model.region2_integral(0.0) == 0.0);
    CHECK(model.region2_bound(0.0) == 0.0);
    double prev = 0.0;
    for (double x : {0.05, 0.2, 0.5, 1.0, 2.0, 4.0}) {
        const double e = model.region2_integral(x);
        CHECK_MESSAGE(e > prev, "x=", x);
        prev = e;
    }
    // Small-x behaviour: the kernel is O(x^{1/2}) and G^II is O(y), so E^II = O(x^2) or smaller.
    CHECK(model.region2_integral(1e-3) < 1e-4);
    CHECK_THROWS_AS(model.region2_integral(-1.0), Error);
}

TEST_CASE("region-I bound decays away from the origin") {
    const BoundModel model(unit_fixture().solution);
    double prev = INFINITY;
    for (double x : {0.5, 1.0, 3.0, 10.0, 50.0, 200.0}) {
        const double b = model.region1_bound(x);
        CHECK(std::isfinite(b));
        CHECK(b > 0.0);
        CHECK_MESSAGE(b < prev, "x=", x);
        prev = b;
    }
    CHECK(model.region1_bound(300.0) < 1e-2 * model.region1_bound(1.0));
    CHECK_THROWS_AS(model.region1_exponent(0.0), Error);
}

TEST_CASE("region-I bound dominates the observed error beyond the transition point") {
    const Fixture& f = unit_fixture();
    const BoundModel model(f.solution);
    int checked = 0;
    for (std::size_t i = 0; i < f.w1.size(); i += 97) {
        const W1Sample& s = f.w1[i];
        if (!(s.x > f.solution.x_star)) continue;
        const BoundReport r = bound_report(s.x, model, f.w1);
        CHECK_MESSAGE(r.observed_error <= r.bound_region1, "x=", s.x);
        CHECK(r.bound_region2 == 0.0);
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("bound report fields") {
    const Fixture& f = unit_fixture();
    const BoundModel model(f.solution);
    const BoundReport r = bound_report(0.5 * f.solution.x_star, model, f.w1);
    CHECK(r.x < f.solution.x_star);
    CHECK(r.sup_M2 > 0.0);
    CHECK(r.error_integral2 > 0.0);
    CHECK(r.bound_region2 == doctest::Approx(r.sup_M2 * std::expm1(r.error_integral2)));
    CHECK(r.error_integral1 == doctest::Approx(6.2 * (std::abs(cplx(0.25, -0.125)) / r.x + 0.1875 / (r.x * r.x))));
    CHECK_THROWS_AS(bound_report(1.0, model, {}), Error);
}

TEST_CASE("bound crossing point is deterministic") {
    const Fixture& f = unit_fixture();
    const BoundModel model(f.solution);
    const double x0 = f.solution.x0_fit;
    const double a = bound_crossing_point(model, 1e-3 * x0, 0.8 * x0);
    const double b = bound_crossing_point(BoundModel(f.solution), 1e-3 * x0, 0.8 * x0);
    CHECK(a == b);
    CHECK(a > 1e-3 * x0);
    CHECK(a < 0.8 * x0);
    // The two bounds really do swap order across the reported root.
    CHECK((model.region1_bound(0.9 * a) - model.region2_bound(0.9 * a)) *
              (model.region1_bound(1.1 * a) - model.region2_bound(1.1 * a)) <
          0.0);
    CHECK_THROWS_AS(bound_crossing_point(model, 2.0, 1.0), Error);
}

TEST_CASE("unmodified region-I integral diverges") {
    const Fixture& f = unit_fixture();
    const auto v = unmodified_region1_integral(2.0, f.solution, {10.0, 30.0, 100.0, 300.0});
    REQUIRE(v.size() == 4);
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i].second > v[i - 1].second);
    // Each step in the upper limit adds at least as much as the previous one did: no saturation.
    CHECK(v[3].second - v[2].second >= 0.9 * (v[2].second - v[1].second));
    CHECK(v[2].second - v[1].second >= 0.9 * (v[1].second - v[0].second));
}
