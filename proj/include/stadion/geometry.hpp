#ifndef STADION_GEOMETRY_HPP
#define STADION_GEOMETRY_HPP

// The elliptical stadium: two half-ellipses with semi-axes (a, 1) centred at
// (+-h, 0), joined by the segments y = +-1, |x| <= h.
//
// Arc length s runs counterclockwise from the rightmost vertex (a + h, 0):
//
//   right ellipse   s in [L - s_q, L) u [0, s_q)      (h + a cos l, sin l)
//   top segment     s in [s_q, s_q + 2h)              (h - u, 1)
//   left ellipse    s in [s_q + 2h, 3 s_q + 2h)       (-h - a cos l, -sin l)
//   bottom segment  s in [3 s_q + 2h, 3 s_q + 4h)     (-h + u, -1)
//
// with l in [-pi/2, pi/2] the ellipse parameter and u in [0, 2h].

#include <array>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "stadion/linalg.hpp"
#include "stadion/taylor.hpp"

namespace stadion {

enum class Piece { RightEllipse, TopSegment, LeftEllipse, BottomSegment };

std::string_view piece_name(Piece p) noexcept;
inline bool is_ellipse(Piece p) { return p == Piece::RightEllipse || p == Piece::LeftEllipse; }

/// Shape parameters (a, h) and the derived perimeter data. Immutable.
class StadiumParams {
public:
    double a() const { return a_; }
    double h() const { return h_; }
    /// Total boundary length L.
    double length() const { return length_; }
    /// Quarter-ellipse arc length s_q.
    double quarter_arc() const { return quarter_; }

    /// Arc-length positions of the four junctions, counterclockwise from
    /// the top-right one.
    std::array<double, 4> junctions() const;

    /// Signed ellipse arc length from l = 0 to l.
    double ellipse_arc(double lambda) const;
    /// |d(position)/dl| on an ellipse piece.
    double ellipse_speed(double lambda) const;
    /// Inverse of ellipse_arc on [-s_q, s_q].
    double ellipse_lambda(double arc) const;
    /// ellipse_arc(lambda0 + e) as a truncated series in e.
    Series1 ellipse_arc_series(double lambda0, int order) const;

    /// Cosine coefficients of the arc-length integrand in cos(2 m u).
    std::span<const double> arc_fourier() const { return *fourier_; }

private:
    friend StadiumParams build_stadium(double a, double h);
    StadiumParams() = default;

    double a_ = 0;
    double h_ = 0;
    double quarter_ = 0;
    double length_ = 0;
    std::shared_ptr<const std::vector<double>> fourier_;
    std::shared_ptr<const std::vector<double>> sine_; // c_m / (2m), m >= 1
};

/// Throws DomainError unless a > 1, h >= 0 and both are finite.
StadiumParams build_stadium(double a, double h);

struct BoundaryPoint {
    Piece piece = Piece::RightEllipse;
    double local = 0;   ///< ellipse parameter l, or distance u along a segment
    double s = 0;       ///< global arc length in [0, L)
    Vec2 position;
    Vec2 tangent;       ///< unit, counterclockwise
    Vec2 normal;        ///< unit, inward
    double curvature = 0;
};

/// Reduce s into [0, L).
double wrap_arclength(const StadiumParams& params, double s);

/// Signed difference s1 - s0 reduced into [-L/2, L/2).
double arclength_difference(const StadiumParams& params, double s1, double s0);

/// Resolve a global arc length (taken modulo L) to a boundary point.
BoundaryPoint point_at(const StadiumParams& params, double s);

/// Global arc length of a piece-local coordinate. Throws DomainError when
/// the local coordinate lies outside the piece.
double arclength_of(const StadiumParams& params, Piece piece, double local);

/// Arc-length distance to the nearest junction (infinite for h = 0, where
/// the boundary is a single analytic ellipse).
double junction_distance(const StadiumParams& params, double s);

/// Curvature of an ellipse piece at parameter l.
double ellipse_curvature(double a, double lambda);

// Arc-length involutions induced by the table symmetries.
double mirror_x_arclength(const StadiumParams& params, double s); ///< (x, y) -> (-x, y)
double mirror_y_arclength(const StadiumParams& params, double s); ///< (x, y) -> (x, -y)
double central_arclength(const StadiumParams& params, double s);  ///< (x, y) -> (-x, -y)

} // namespace stadion

#endif
