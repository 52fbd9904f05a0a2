#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "stadion/error.hpp"
#include "stadion/pantograph.hpp"

using namespace stadion;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

// Root of (n + 1) u^2 - (n + 2) u + 1 - c = 0 above 1, then a = sqrt(2 / u).
double alpha_closed_form(int n, double c)
{
    const double b = n + 2.0;
    const double u = (b + std::sqrt(b * b - 4.0 * (n + 1) * (1.0 - c))) / (2.0 * (n + 1));
    return std::sqrt(2.0 / u);
}

// Launch from the marked point with the closed-form angle and follow the
// plain billiard map once around; no refinement.
double unrefined_closure(int n, double a, double h)
{
    const PantographShape sh = pantograph_shape(n, a, h);
    const StadiumParams p = build_stadium(a, h);
    const PhasePoint x0{arclength_of(p, Piece::RightEllipse, sh.lambda), -sh.beta};
    return closure_residual(p, x0, 4 + 2 * n);
}

} // namespace

TEST_SUITE("pantograph") {

TEST_CASE("anchor values")
{
    CHECK(solve_t(0, kSqrt2, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    const DeltaFactors d = delta(0, kSqrt2, 0.5);
    CHECK(solve_t(0, kSqrt2, 0.5) == doctest::Approx(1.1877794754).epsilon(1e-9));
    CHECK(d.delta1 == doctest::Approx(0.261668).epsilon(1e-5));
    CHECK(d.delta2 == doctest::Approx(1.646868).epsilon(1e-5));
    CHECK(d.delta == doctest::Approx(0.430932).epsilon(1e-5));
    CHECK(d.delta == doctest::Approx(d.delta1 * d.delta2));
    CHECK(delta(0, kSqrt2, 1.0).delta == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(solve_t(0, kSqrt2, 100.0) == doctest::Approx(0.7112).epsilon(1e-4));
    CHECK(alpha(1, 1.0) == doctest::Approx(1.15470054).epsilon(1e-8));
    CHECK(level_curve_h(0, 1.0, kSqrt2) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(level_curve_h(0, 1.0, 2.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    CHECK(delta_zero_curve(1, 2.0) == doctest::Approx(2.0 * kSqrt2).epsilon(1e-12));
}

TEST_CASE("t solves its equation and closes the orbit")
{
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        const int n = static_cast<int>(g() % 4);
        const double a = 1.05 + 1.5 * U(g);
        const double h = existence_threshold(n, a) + 0.05 + 2.0 * U(g);
        const double t = solve_t(n, a, h);
        CHECK(t > 1.0 / a);
        CHECK(std::fabs(t_equation_residual(n, a, h, t)) < 1e-9 * (1.0 + h));
        CHECK(unrefined_closure(n, a, h) < 1e-7);
    }
}

TEST_CASE("alpha against the closed form")
{
    for (int n = 0; n <= 4; ++n)
        for (double c : {0.1, 0.5, 0.75, 1.0})
            CHECK(alpha(n, c) == doctest::Approx(alpha_closed_form(n, c)).epsilon(1e-10));
    CHECK(delta_limit_small_h(2, alpha(2, 0.3)) == doctest::Approx(0.3));
}

TEST_CASE("limits of t")
{
    for (int n : {0, 1, 2}) {
        double prev = INFINITY;
        for (double h : {1e2, 1e3, 1e4, 1e5}) {
            const double e = std::fabs(solve_t(n, 1.5, h) - 1.0 / 1.5);
            CHECK(e < prev);
            prev = e;
        }
        CHECK(prev < 1e-4);
    }
    const double a = 2.5, target = 1.0 / std::sqrt(a * (a - 2.0));
    double prev = INFINITY;
    for (double h : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const double e = std::fabs(solve_t(1, a, h) - target);
        CHECK(e < prev);
        prev = e;
    }
    CHECK(std::fabs(solve_t(0, a, 1e-6) - 1.0 / std::sqrt(a * a - 2.0)) < 1e-4);
    const double thr = existence_threshold(3, a);
    CHECK(thr == doctest::Approx(2.0 * std::sqrt(a * (a - 2.0))));
    CHECK(std::fabs(solve_t(3, a, thr * (1 + 1e-9)) - target) < 1e-3);
}

TEST_CASE("delta limits")
{
    for (int n = 0; n <= 3; ++n)
        CHECK(delta(n, 1.2, 1e-7).delta == doctest::Approx(delta_limit_small_h(n, 1.2)).epsilon(1e-4));
    CHECK(delta(0, 1.2, 1e-7).delta2 == doctest::Approx(2.0 / 1.44 - 1.0).epsilon(1e-4));
    CHECK(delta(1, 1.8, 1e4).delta > 1e3);
}

TEST_CASE("existence region")
{
    const double a = 2.5;
    CHECK(existence_threshold(1, a) == 0.0);
    CHECK(existence_threshold(2, a) == doctest::Approx(std::sqrt(1.25)));
    CHECK(pantograph_exists(2, a, 1.2));
    CHECK_FALSE(pantograph_exists(2, a, 1.0));
    CHECK_THROWS_AS(solve_t(2, a, 1.0), ExistenceError);
    CHECK_THROWS_AS(solve_t(-1, a, 1.0), DomainError);
    CHECK_THROWS_AS(solve_t(0, 0.9, 1.0), DomainError);
}

TEST_CASE("classification")
{
    CHECK(classify_delta(0.3, 4).cls == StabilityClass::Elliptic);
    CHECK(classify_delta(1.5, 4).cls == StabilityClass::Hyperbolic);
    CHECK(classify_delta(-0.2, 4).cls == StabilityClass::Hyperbolic);
    CHECK(classify_delta(1.0, 4).cls == StabilityClass::Parabolic);
    CHECK(classify_delta(0.0, 4).cls == StabilityClass::Parabolic);
    const StabilityReport r = classify_delta(0.5, 4);
    CHECK(r.cls == StabilityClass::Resonant);
    CHECK(r.label() == "Resonant(2,1)");
    CHECK(classify_delta(0.75, 4).label() == "Resonant(3,1)");
    CHECK(classify_delta(0.75, 2).cls == StabilityClass::Elliptic);
    const StabilityReport e = classify_delta(0.3, 4);
    CHECK(e.half_trace == doctest::Approx(4 * 0.3 - 2));
    CHECK(std::abs(e.mu) == doctest::Approx(1.0));
    CHECK(std::cos(e.phi) == doctest::Approx(2 * 0.3 - 1));
}

TEST_CASE("resonance levels")
{
    CHECK(resonance_constant(1, 2) == doctest::Approx(0.5));
    CHECK(resonance_constant(1, 3) == doctest::Approx(0.75));
    CHECK(resonance_constant(3, 4) == doctest::Approx((2.0 - kSqrt2) / 4.0));
    const auto lv = resonance_levels(4);
    REQUIRE(lv.size() == 5);
    for (std::size_t i = 1; i < lv.size(); ++i)
        CHECK(lv[i - 1].c < lv[i].c);
}

TEST_CASE("non-resonant strips")
{
    const NonresonantStrips s = nonresonant_intervals(0, kSqrt2, 4);
    REQUIRE(s.intervals.size() == 6);
    const double cuts[] = {0.213585, 0.324206, 0.563817, 0.786151, 0.875506};
    for (int i = 0; i < 5; ++i) {
        CHECK(s.cut_h[i] == doctest::Approx(cuts[i]).epsilon(1e-5));
        CHECK(s.intervals[i].hi == s.intervals[i + 1].lo);
        CHECK(delta(0, kSqrt2, s.cut_h[i]).delta == doctest::Approx(s.cuts[i].c).epsilon(1e-10));
    }
    CHECK(s.intervals.back().hi == doctest::Approx(1.0));
}

TEST_CASE("chaos bound")
{
    const ChaosBound c = chaos_bound(1.2);
    CHECK(c.H == doctest::Approx(0.728285).epsilon(1e-5));
    CHECK(c.n_max == 1);
    for (double a : {1.05, 1.1, 1.3}) {
        const ChaosBound b = chaos_bound(a);
        CHECK(b.n_max == static_cast<int>(std::floor(2 * (a * a - 1) / (2 - a * a))));
        for (int n = 0; n <= b.n_max; ++n)
            CHECK(level_curve_h(n, 1.0, a) <= b.H * (1 + 1e-12));
    }
}

TEST_CASE("island intervals above sqrt 2")
{
    const auto v = unbounded_island_intervals(1.6, 5);
    REQUIRE(v.size() == 6);
    for (const auto& s : v) {
        CHECK(s.nonempty());
        const double mid = 0.5 * (s.lo + s.hi);
        const double d = delta(s.n, 1.6, mid).delta;
        CHECK(d > 0.0);
        CHECK(d < 1.0);
    }
}

TEST_CASE("numeric half trace")
{
    for (int n = 0; n <= 5; ++n) {
        const PantographOrbit o = materialize_orbit(n, 1.6, 0.5 + n);
        const StadiumParams p = build_stadium(1.6, 0.5 + n);
        CHECK(o.closure < 1e-9);
        CHECK(static_cast<int>(o.impacts.size()) == o.period());
        CHECK(numeric_half_trace(p, o) == doctest::Approx(4 * o.shape.factors.delta - 2).epsilon(1e-8));
    }
}

}
