#ifndef STADION_TEST_FIXTURES_HPP
#define STADION_TEST_FIXTURES_HPP

// Synthetic area-preserving maps with known normal forms.

#include <cmath>
#include <complex>

#include "stadion/normalform.hpp"

namespace fixtures {

using stadion::Jet;
using stadion::PlanarMap;
using stadion::Vec2;

/// (x, y) -> rotation by angle + tau1 r^2 + tau2 r^4, r^2 = x^2 + y^2.
/// In complex form z -> e^{i angle} z e^{i (tau1 |z|^2 + tau2 |z|^4)}.
inline PlanarMap twist_map(double angle, double tau1, double tau2 = 0.0)
{
    PlanarMap f;
    f.apply = [=](Vec2 x) {
        const double r2 = x.x * x.x + x.y * x.y;
        const double th = angle + tau1 * r2 + tau2 * r2 * r2;
        return Vec2{std::cos(th) * x.x - std::sin(th) * x.y, std::sin(th) * x.x + std::cos(th) * x.y};
    };
    f.apply_jet = [=](const Jet& X, const Jet& Y) {
        const Jet r2 = X * X + Y * Y;
        const Jet th = angle + tau1 * r2 + tau2 * (r2 * r2);
        const Jet c = cos(th), s = sin(th);
        return std::array<Jet, 2>{c * X - s * Y, s * X + c * Y};
    };
    return f;
}

/// The twist map conjugated by the symplectic shear (x, y) -> (x, y + k x^2),
/// which hides the normal form behind non-resonant quadratic terms.
inline PlanarMap sheared_twist_map(double angle, double tau1, double k)
{
    const PlanarMap g = twist_map(angle, tau1);
    PlanarMap f;
    f.apply = [=](Vec2 x) {
        const Vec2 u{x.x, x.y - k * x.x * x.x};
        const Vec2 v = g.apply(u);
        return Vec2{v.x, v.y + k * v.x * v.x};
    };
    f.apply_jet = [=](const Jet& X, const Jet& Y) {
        const auto v = g.apply_jet(X, Y - k * (X * X));
        return std::array<Jet, 2>{v[0], v[1] + k * (v[0] * v[0])};
    };
    return f;
}

/// Linear rotation by `angle`.
inline PlanarMap rotation_map(double angle) { return twist_map(angle, 0.0); }

} // namespace fixtures

#endif
