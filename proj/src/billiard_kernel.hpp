#ifndef STADION_BILLIARD_KERNEL_HPP
#define STADION_BILLIARD_KERNEL_HPP

// One bounce of the billiard map, generic over the scalar type.
//
// With T = double this is the production map. With T = Jet the same
// arithmetic propagates truncated power series: every discrete decision
// (which piece, which quadratic root) is taken on the constant parts, and
// the continuous quantities are then recomputed in jet arithmetic. The
// arc-length inversion uses Newton iteration in jet arithmetic, which gains
// at least one order per sweep.

#include <cmath>
#include <limits>
#include <numbers>

#include "stadion/error.hpp"
#include "stadion/geometry.hpp"
#include "stadion/linalg.hpp"
#include "stadion/taylor.hpp"
#include "stadion/tolerances.hpp"

namespace stadion::detail {

inline double ellipse_arc_t(const StadiumParams& p, double lam) { return p.ellipse_arc(lam); }

inline Jet ellipse_arc_t(const StadiumParams& p, const Jet& lam)
{
    const Series1 e = p.ellipse_arc_series(lam.constant(), lam.order());
    return compose_univariate(e.coeffs(), lam);
}

inline double ellipse_speed_t(const StadiumParams& p, double lam) { return p.ellipse_speed(lam); }

inline Jet ellipse_speed_t(const StadiumParams& p, const Jet& lam)
{
    const Jet s = sin(lam);
    return sqrt((p.a() * p.a() - 1.0) * (s * s) + 1.0);
}

inline double ellipse_lambda_t(const StadiumParams& p, double arc) { return p.ellipse_lambda(arc); }

inline Jet ellipse_lambda_t(const StadiumParams& p, const Jet& arc)
{
    Jet lam(arc.order(), p.ellipse_lambda(arc.constant()));
    for (int it = 0; it <= arc.order() + 1; ++it)
        lam = lam - (ellipse_arc_t(p, lam) - arc) / ellipse_speed_t(p, lam);
    return lam;
}

template <class T>
struct FrameT {
    Piece piece = Piece::RightEllipse;
    T local{};
    Vec2T<T> position;
    Vec2T<T> tangent;
    Vec2T<T> normal;
    T curvature{};
};

template <class T>
T constant_like(const T& proto, double v)
{
    if constexpr (std::is_same_v<T, double>)
        return v;
    else
        return T(proto.order(), v);
}

// Frame on an ellipse piece from its parameter.
template <class T>
FrameT<T> ellipse_frame(const StadiumParams& p, Piece piece, const T& lam)
{
    using std::cos;
    using std::sin;
    using std::sqrt;
    const double a = p.a(), h = p.h();
    const double sign = piece == Piece::RightEllipse ? 1.0 : -1.0;
    const T sn = sin(lam), cs = cos(lam);
    const T g2 = (a * a) * (sn * sn) + cs * cs;
    const T g = sqrt(g2);
    FrameT<T> f;
    f.piece = piece;
    f.local = lam;
    f.position = {sign * (a * cs + h), sign * sn};
    f.tangent = {(-sign * a) * sn / g, sign * cs / g};
    f.normal = {-1.0 * f.tangent.y, f.tangent.x};
    f.curvature = a / (g2 * g);
    return f;
}

template <class T>
FrameT<T> segment_frame(const StadiumParams& p, Piece piece, const T& u)
{
    const double h = p.h();
    FrameT<T> f;
    f.piece = piece;
    f.local = u;
    const T one = constant_like(u, 1.0);
    const T zero = constant_like(u, 0.0);
    if (piece == Piece::TopSegment) {
        f.position = {h - u, one};
        f.tangent = {-1.0 * one, zero};
    } else {
        f.position = {u - h, -1.0 * one};
        f.tangent = {one, zero};
    }
    f.normal = {-1.0 * f.tangent.y, f.tangent.x};
    f.curvature = zero;
    return f;
}

// Frame at global arc length s; the piece is resolved on the constant part.
template <class T>
FrameT<T> frame_at(const StadiumParams& p, T s)
{
    const double L = p.length();
    const double sv = value(s);
    const double wrapped = wrap_arclength(p, sv);
    s = s + (wrapped - sv);
    const auto j = p.junctions();
    const double sq = p.quarter_arc(), h = p.h();
    if (wrapped < j[0])
        return ellipse_frame(p, Piece::RightEllipse, ellipse_lambda_t(p, s));
    if (wrapped < j[1])
        return segment_frame(p, Piece::TopSegment, s - sq);
    if (wrapped < j[2])
        return ellipse_frame(p, Piece::LeftEllipse, ellipse_lambda_t(p, s - (2 * sq + 2 * h)));
    if (wrapped < j[3])
        return segment_frame(p, Piece::BottomSegment, s - j[2]);
    return ellipse_frame(p, Piece::RightEllipse, ellipse_lambda_t(p, s - L));
}

enum class RootKind { QuadraticLarge, QuadraticSmall, Linear };

struct HitChoice {
    Piece piece = Piece::RightEllipse;
    RootKind root = RootKind::Linear;
    double param = std::numeric_limits<double>::infinity();
};

// Decide the exit piece and root branch from plain doubles.
inline HitChoice choose_hit(const StadiumParams& p, Vec2 P, Vec2 d, double eps)
{
    const double a = p.a(), h = p.h();
    const double tol = 1e-12 * (a + h + 1.0);
    HitChoice best;
    auto consider = [&](Piece piece, RootKind kind, double r, bool ok) {
        if (ok && r > eps && r < best.param)
            best = {piece, kind, r};
    };
    for (Piece piece : {Piece::RightEllipse, Piece::LeftEllipse}) {
        const double side = piece == Piece::RightEllipse ? 1.0 : -1.0;
        const double cx = side * h;
        const double px = P.x - cx, py = P.y;
        const double A = d.x * d.x / (a * a) + d.y * d.y;
        const double B = 2.0 * (px * d.x / (a * a) + py * d.y);
        const double C = px * px / (a * a) + py * py - 1.0;
        const double disc = B * B - 4.0 * A * C;
        if (disc < 0)
            continue;
        const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
        const double r1 = q / A;
        const double r2 = q != 0.0 ? C / q : r1;
        consider(piece, RootKind::QuadraticLarge, r1, side * (P.x + r1 * d.x - cx) >= -tol);
        consider(piece, RootKind::QuadraticSmall, r2, side * (P.x + r2 * d.x - cx) >= -tol);
    }
    if (h > 0) {
        if (d.y > 0) {
            const double r = (1.0 - P.y) / d.y;
            consider(Piece::TopSegment, RootKind::Linear, r, std::fabs(P.x + r * d.x) <= h + tol);
        } else if (d.y < 0) {
            const double r = (-1.0 - P.y) / d.y;
            consider(Piece::BottomSegment, RootKind::Linear, r, std::fabs(P.x + r * d.x) <= h + tol);
        }
    }
    return best;
}

template <class T>
struct BounceT {
    T s;
    T beta;
    T chord;
    FrameT<T> from;
    FrameT<T> to;
};

template <class T>
BounceT<T> bounce(const StadiumParams& p, const T& s, const T& beta, const ToleranceSet& tol)
{
    using std::atan2;
    using std::cos;
    using std::sin;
    using std::sqrt;

    if (!(std::fabs(value(beta)) < std::numbers::pi / 2 - tol.graze))
        throw GrazingError("reflection angle within grazing tolerance of pi/2");

    const double a = p.a(), h = p.h(), L = p.length(), sq = p.quarter_arc();
    BounceT<T> out;
    out.from = frame_at(p, s);
    const FrameT<T>& F = out.from;
    const T cb = cos(beta), sb = sin(beta);
    const Vec2T<T> d{cb * F.normal.x + sb * F.tangent.x, cb * F.normal.y + sb * F.tangent.y};

    const Vec2 P0{value(F.position.x), value(F.position.y)};
    const Vec2 d0{value(d.x), value(d.y)};
    const HitChoice hit = choose_hit(p, P0, d0, tol.chord_min * L);
    if (!std::isfinite(hit.param))
        throw CornerError("no forward intersection with the boundary");

    T r;
    if (hit.root == RootKind::Linear) {
        const double target = hit.piece == Piece::TopSegment ? 1.0 : -1.0;
        r = (target - F.position.y) / d.y;
    } else {
        const double cx = hit.piece == Piece::RightEllipse ? h : -h;
        const T px = F.position.x - cx;
        const T& py = F.position.y;
        const T A = (d.x * d.x) / (a * a) + d.y * d.y;
        const T B = 2.0 * ((px * d.x) / (a * a) + py * d.y);
        const T C = (px * px) / (a * a) + py * py - 1.0;
        const T root = sqrt(B * B - 4.0 * (A * C));
        const T q = value(B) >= 0 ? -0.5 * (B + root) : -0.5 * (B - root);
        r = hit.root == RootKind::QuadraticLarge ? q / A : C / q;
    }
    out.chord = r;
    const Vec2T<T> H{F.position.x + r * d.x, F.position.y + r * d.y};

    T s_next;
    switch (hit.piece) {
    case Piece::RightEllipse: {
        const T lam = atan2(H.y, (H.x - h) / a);
        out.to = ellipse_frame(p, Piece::RightEllipse, lam);
        s_next = ellipse_arc_t(p, lam);
        if (value(s_next) < 0)
            s_next = s_next + L;
        break;
    }
    case Piece::LeftEllipse: {
        const T lam = atan2(-1.0 * H.y, -1.0 * (H.x + h) / a);
        out.to = ellipse_frame(p, Piece::LeftEllipse, lam);
        s_next = ellipse_arc_t(p, lam) + (2 * sq + 2 * h);
        break;
    }
    case Piece::TopSegment: {
        const T u = h - H.x;
        out.to = segment_frame(p, Piece::TopSegment, u);
        s_next = u + sq;
        break;
    }
    case Piece::BottomSegment: {
        const T u = H.x + h;
        out.to = segment_frame(p, Piece::BottomSegment, u);
        s_next = u + (3 * sq + 2 * h);
        break;
    }
    }
    const double sv = value(s_next);
    s_next = s_next + (wrap_arclength(p, sv) - sv);
    if (junction_distance(p, value(s_next)) < tol.corner)
        throw CornerError("impact within corner tolerance of a junction");

    out.s = s_next;
    out.beta = atan2(dot(d, out.to.tangent), -1.0 * dot(d, out.to.normal));
    return out;
}

} // namespace stadion::detail

#endif
