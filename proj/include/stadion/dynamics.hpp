#ifndef STADION_DYNAMICS_HPP
#define STADION_DYNAMICS_HPP

// The billiard map T on the annulus [0, L) x (-pi/2, pi/2).
//
// beta is measured from the inward normal and is positive toward the
// counterclockwise tangent: the outgoing direction is cos(beta) N + sin(beta) T.
// T preserves cos(beta) ds dbeta, i.e. ds d(sin beta).

#include <vector>

#include "stadion/geometry.hpp"
#include "stadion/linalg.hpp"
#include "stadion/taylor.hpp"
#include "stadion/tolerances.hpp"

namespace stadion {

struct PhasePoint {
    double s = 0;
    double beta = 0;
};

struct Bounce {
    PhasePoint next;
    double chord = 0;
    Piece from = Piece::RightEllipse;
    Piece to = Piece::RightEllipse;
    double curvature_from = 0;
    double curvature_to = 0;
    Vec2 impact;     ///< position of the next impact
};

/// Derivative of T (or of an iterate) in (s, beta) coordinates.
struct TangentMatrix {
    Mat2 m;
    double cos_from = 1;
    double cos_to = 1;
};

/// One bounce with auxiliary data. Throws GrazingError or CornerError.
Bounce bounce(const StadiumParams& params, PhasePoint p,
              const ToleranceSet& tol = default_tolerances());

PhasePoint step(const StadiumParams& params, PhasePoint p,
                const ToleranceSet& tol = default_tolerances());

/// T^-1 = R T R with R(s, beta) = (s, -beta).
PhasePoint step_back(const StadiumParams& params, PhasePoint p,
                     const ToleranceSet& tol = default_tolerances());

PhasePoint iterate(const StadiumParams& params, PhasePoint p, int count,
                   const ToleranceSet& tol = default_tolerances());

/// Per-bounce derivative:
///   (1/cos b') [[l K - cos b,  -l], [K cos b' + K' cos b - l K K', l K' - cos b']]
/// with l the chord, K, K' the curvatures at source and target.
TangentMatrix tangent_matrix(const StadiumParams& params, PhasePoint p,
                             const ToleranceSet& tol = default_tolerances());

/// Ordered product of `period` tangent matrices along the orbit of p
/// (identity for period 0).
TangentMatrix monodromy(const StadiumParams& params, PhasePoint p, int period,
                        const ToleranceSet& tol = default_tolerances());

/// Distance between p and T^period(p), with s compared modulo L.
double closure_residual(const StadiumParams& params, PhasePoint p, int period,
                        const ToleranceSet& tol = default_tolerances());

/// Position and outgoing unit direction of a phase point.
struct Ray {
    Vec2 origin;
    Vec2 direction;
};
Ray ray_of(const StadiumParams& params, PhasePoint p);

/// Phase point leaving `origin` (which must lie on the boundary at arc
/// length s) along `direction`.
PhasePoint phase_from_direction(const StadiumParams& params, double s, Vec2 direction);

// Phase-space involutions.
inline PhasePoint time_reverse(PhasePoint p) { return {p.s, -p.beta}; }
PhasePoint mirror_x(const StadiumParams& params, PhasePoint p); ///< table reflection x -> -x
PhasePoint mirror_y(const StadiumParams& params, PhasePoint p); ///< table reflection y -> -y

/// First integral of the ellipse billiard (h = 0):
/// ((p - f1) x v) . ((p - f2) x v) with foci f1,2 = (+-sqrt(a^2 - 1), 0).
double ellipse_invariant(const StadiumParams& params, PhasePoint p);

/// Jet of a phase point: s and beta as polynomials in two deviations.
struct PhaseJet {
    Jet s;
    Jet beta;
};

/// One bounce propagated in truncated power-series arithmetic.
PhaseJet step_jet(const StadiumParams& params, const PhaseJet& p,
                  const ToleranceSet& tol = default_tolerances());

} // namespace stadion

#endif
