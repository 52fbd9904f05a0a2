#include "stadion/dynamics.hpp"

#include <cmath>

#include "billiard_kernel.hpp"
#include "stadion/error.hpp"

namespace stadion {

Bounce bounce(const StadiumParams& params, PhasePoint p, const ToleranceSet& tol)
{
    const auto b = detail::bounce<double>(params, p.s, p.beta, tol);
    Bounce out;
    out.next = {b.s, b.beta};
    out.chord = b.chord;
    out.from = b.from.piece;
    out.to = b.to.piece;
    out.curvature_from = b.from.curvature;
    out.curvature_to = b.to.curvature;
    out.impact = b.to.position;
    return out;
}

PhasePoint step(const StadiumParams& params, PhasePoint p, const ToleranceSet& tol)
{
    return bounce(params, p, tol).next;
}

PhasePoint step_back(const StadiumParams& params, PhasePoint p, const ToleranceSet& tol)
{
    return time_reverse(step(params, time_reverse(p), tol));
}

PhasePoint iterate(const StadiumParams& params, PhasePoint p, int count, const ToleranceSet& tol)
{
    for (int k = 0; k < count; ++k)
        p = step(params, p, tol);
    return p;
}

TangentMatrix tangent_matrix(const StadiumParams& params, PhasePoint p, const ToleranceSet& tol)
{
    const Bounce b = bounce(params, p, tol);
    const double l = b.chord;
    const double K = b.curvature_from, K1 = b.curvature_to;
    const double c = std::cos(p.beta), c1 = std::cos(b.next.beta);
    TangentMatrix t;
    t.m = (1.0 / c1) * Mat2{l * K - c, -l, K * c1 + K1 * c - l * K * K1, l * K1 - c1};
    t.cos_from = c;
    t.cos_to = c1;
    return t;
}

TangentMatrix monodromy(const StadiumParams& params, PhasePoint p, int period, const ToleranceSet& tol)
{
    TangentMatrix acc;
    acc.cos_from = acc.cos_to = std::cos(p.beta);
    for (int k = 0; k < period; ++k) {
        const TangentMatrix t = tangent_matrix(params, p, tol);
        acc.m = t.m * acc.m;
        acc.cos_to = t.cos_to;
        p = step(params, p, tol);
    }
    return acc;
}

double closure_residual(const StadiumParams& params, PhasePoint p, int period, const ToleranceSet& tol)
{
    const PhasePoint q = iterate(params, p, period, tol);
    return std::hypot(arclength_difference(params, q.s, p.s), q.beta - p.beta);
}

Ray ray_of(const StadiumParams& params, PhasePoint p)
{
    const BoundaryPoint b = point_at(params, p.s);
    const double c = std::cos(p.beta), s = std::sin(p.beta);
    return {b.position, {c * b.normal.x + s * b.tangent.x, c * b.normal.y + s * b.tangent.y}};
}

PhasePoint phase_from_direction(const StadiumParams& params, double s, Vec2 direction)
{
    const BoundaryPoint b = point_at(params, s);
    return {b.s, std::atan2(dot(direction, b.tangent), dot(direction, b.normal))};
}

PhasePoint mirror_x(const StadiumParams& params, PhasePoint p)
{
    return {mirror_x_arclength(params, p.s), -p.beta};
}

PhasePoint mirror_y(const StadiumParams& params, PhasePoint p)
{
    return {mirror_y_arclength(params, p.s), -p.beta};
}

double ellipse_invariant(const StadiumParams& params, PhasePoint p)
{
    const double f = std::sqrt(params.a() * params.a() - 1.0);
    const Ray r = ray_of(params, p);
    const Vec2 f1{f, 0.0}, f2{-f, 0.0};
    return cross(r.origin - f1, r.direction) * cross(r.origin - f2, r.direction);
}

PhaseJet step_jet(const StadiumParams& params, const PhaseJet& p, const ToleranceSet& tol)
{
    auto b = detail::bounce<Jet>(params, p.s, p.beta, tol);
    return {std::move(b.s), std::move(b.beta)};
}

} // namespace stadion
