#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "stadion/dynamics.hpp"
#include "stadion/error.hpp"

using namespace stadion;

namespace {

// Random bounce away from junctions on both ends.
PhasePoint generic_point(const StadiumParams& p, std::mt19937_64& g)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (;;) {
        const PhasePoint x{p.length() * U(g), std::asin(1.8 * U(g) - 0.9)};
        try {
            const PhasePoint y = step(p, x);
            if (junction_distance(p, x.s) > 1e-3 && junction_distance(p, y.s) > 1e-3)
                return x;
        } catch (const Error&) {
        }
    }
}

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("tangent matrix against finite differences")
{
    std::mt19937_64 g(3);
    for (double a : {1.2, 1.8}) {
        const StadiumParams p = build_stadium(a, 0.8);
        for (int k = 0; k < 30; ++k) {
            const PhasePoint x = generic_point(p, g);
            const TangentMatrix t = tangent_matrix(p, x);
            const double e = 1e-7;
            const PhasePoint sp = step(p, {x.s + e, x.beta}), sm = step(p, {x.s - e, x.beta});
            const PhasePoint bp = step(p, {x.s, x.beta + e}), bm = step(p, {x.s, x.beta - e});
            CHECK(arclength_difference(p, sp.s, sm.s) / (2 * e) == doctest::Approx(t.m.a11).epsilon(1e-5));
            CHECK((sp.beta - sm.beta) / (2 * e) == doctest::Approx(t.m.a21).epsilon(1e-5));
            CHECK(arclength_difference(p, bp.s, bm.s) / (2 * e) == doctest::Approx(t.m.a12).epsilon(1e-5));
            CHECK((bp.beta - bm.beta) / (2 * e) == doctest::Approx(t.m.a22).epsilon(1e-5));
            CHECK(t.m.det() == doctest::Approx(t.cos_from / t.cos_to).epsilon(1e-10));
        }
    }
}

TEST_CASE("time reversal")
{
    std::mt19937_64 g(5);
    const StadiumParams p = build_stadium(1.4, 1.1);
    for (int k = 0; k < 50; ++k) {
        const PhasePoint x = generic_point(p, g);
        const PhasePoint y = step_back(p, step(p, x));
        CHECK(std::fabs(arclength_difference(p, y.s, x.s)) < 1e-10);
        CHECK(y.beta == doctest::Approx(x.beta));
    }
}

TEST_CASE("mirror equivariance")
{
    std::mt19937_64 g(9);
    const StadiumParams p = build_stadium(1.7, 0.6);
    for (int k = 0; k < 30; ++k) {
        const PhasePoint x = generic_point(p, g);
        const PhasePoint a = step(p, mirror_x(p, x)), b = mirror_x(p, step(p, x));
        CHECK(std::fabs(arclength_difference(p, a.s, b.s)) < 1e-9);
        CHECK(a.beta == doctest::Approx(b.beta));
        const PhasePoint c = step(p, mirror_y(p, x)), d = mirror_y(p, step(p, x));
        CHECK(std::fabs(arclength_difference(p, c.s, d.s)) < 1e-9);
        CHECK(c.beta == doctest::Approx(d.beta));
    }
}

TEST_CASE("ray geometry")
{
    const StadiumParams p = build_stadium(1.5, 1.0);
    const PhasePoint x{0.4, 0.3};
    const Ray r = ray_of(p, x);
    const Bounce b = bounce(p, x);
    const Vec2 d = b.impact - r.origin;
    CHECK(cross(d, r.direction) == doctest::Approx(0.0));
    CHECK(std::hypot(d.x, d.y) == doctest::Approx(b.chord));
    const PhasePoint back = phase_from_direction(p, x.s, r.direction);
    CHECK(back.beta == doctest::Approx(x.beta));
}

TEST_CASE("ellipse invariant")
{
    const StadiumParams e = build_stadium(1.3, 0.0);
    PhasePoint x{1.1, -0.7};
    const double L0 = ellipse_invariant(e, x);
    for (int k = 0; k < 5000; ++k) {
        x = step(e, x);
        REQUIRE(ellipse_invariant(e, x) == doctest::Approx(L0).epsilon(1e-10));
    }
}

TEST_CASE("minor-axis orbit of the ellipse")
{
    const StadiumParams e = build_stadium(1.2, 0.0);
    const PhasePoint x{e.quarter_arc(), 0.0};
    const PhasePoint y = step(e, x);
    CHECK(y.s == doctest::Approx(3 * e.quarter_arc()));
    CHECK(closure_residual(e, x, 2) < 1e-12);
    // elliptic: |trace| < 2
    CHECK(std::fabs(monodromy(e, x, 2).m.trace()) < 2.0);
}

TEST_CASE("jet propagation matches the map")
{
    const StadiumParams p = build_stadium(1.4, 0.5);
    const PhasePoint x{0.3, 0.2};
    const int N = 4;
    PhaseJet j{Jet::variable(N, 0, x.s), Jet::variable(N, 1, x.beta)};
    const PhaseJet y = step_jet(p, j);
    const PhasePoint y0 = step(p, x);
    CHECK(wrap_arclength(p, y.s.constant()) == doctest::Approx(y0.s));
    const TangentMatrix t = tangent_matrix(p, x);
    CHECK(y.s.coeff(1, 0) == doctest::Approx(t.m.a11));
    CHECK(y.beta.coeff(0, 1) == doctest::Approx(t.m.a22));
    const double ds = 2e-3, db = -1e-3;
    const PhasePoint z = step(p, {x.s + ds, x.beta + db});
    CHECK(y.beta.evaluate(ds, db) == doctest::Approx(z.beta).epsilon(1e-10));
}

TEST_CASE("refused bounces")
{
    const StadiumParams p = build_stadium(1.5, 1.0);
    CHECK_THROWS_AS(step(p, {0.3, std::numbers::pi / 2}), GrazingError);
    // the vertical chord from the top-right junction ends on the bottom-right one
    CHECK_THROWS_AS(step(p, {p.quarter_arc(), 0.0}), CornerError);
}

}
