#ifndef STADION_PANTOGRAPH_HPP
#define STADION_PANTOGRAPH_HPP

// Pantographic orbits Pan(n, a, h): symmetric (4 + 2n)-periodic orbits with
// two impacts on each half-ellipse joined by a vertical chord, and n segment
// impacts on each crossing between the half-ellipses.
//
// The marked point P = (h + a cos l, sin l) on the right half-ellipse is
// parametrized by t = tan l, which solves
//
//   n = h (a^2 t^2 - 1) / (2 a t) + ((a^2 - 2) t^2 - 1) / (2 t sqrt(1 + t^2)),
//
// and the linear stability of the orbit is governed by
//
//   Delta = (l1 K / cos b - 1)(l2 K / cos b - 1),   half-map trace = 4 Delta - 2.

#include <complex>
#include <string>
#include <vector>

#include "stadion/dynamics.hpp"
#include "stadion/geometry.hpp"
#include "stadion/tolerances.hpp"

namespace stadion {

enum class StabilityClass { Elliptic, Hyperbolic, Parabolic, Resonant };

std::string_view stability_name(StabilityClass c) noexcept;

struct StabilityReport {
    double delta = 0;
    double half_trace = 0;         ///< 4 Delta - 2
    StabilityClass cls = StabilityClass::Hyperbolic;
    int resonance_k = 0;           ///< set for Resonant
    int resonance_j = 0;
    double phi = 0;                ///< arccos(2 Delta - 1) when 0 <= Delta <= 1, else NaN
    std::complex<double> mu;       ///< full-map eigenvalue exp(2 i phi)

    /// "Elliptic", "Resonant(3,1)", ...
    std::string label() const;
};

struct DeltaFactors {
    double delta1 = 0;
    double delta2 = 0;
    double delta = 0;
};

/// Closed-form quantities at the marked point P.
struct PantographShape {
    double t = 0;
    double lambda = 0;
    double beta = 0;      ///< angle of the vertical chord with the normal at P (> 0)
    double cos_beta = 0;
    double l1 = 0;        ///< vertical chord, 2 sin l
    double l2 = 0;        ///< unfolded crossing length
    double K = 0;         ///< curvature at P
    DeltaFactors factors;
};

struct PantographOrbit {
    int n = 0;
    double a = 0;
    double h = 0;
    PantographShape shape;
    /// Impacts in orbit order, starting at P with the vertical chord downward.
    /// In the map's sign convention the angle at P is -shape.beta.
    std::vector<PhasePoint> impacts;
    std::vector<Vec2> positions;
    std::vector<Piece> pieces;
    double closure = 0;   ///< |T^(4+2n)(P) - P| after refinement

    int period() const { return 4 + 2 * n; }
    PhasePoint start() const { return impacts.front(); }
};

/// Residual of the t-equation: right-hand side minus n.
double t_equation_residual(int n, double a, double h, double t);

/// Infimum of h for which Pan(n, a, h) exists.
double existence_threshold(int n, double a);

/// True when (a, h) lies in the existence region of Pan(n, ., .).
bool pantograph_exists(int n, double a, double h);

/// Unique root t in (1/a, inf). Throws DomainError on invalid (n, a, h) and
/// ExistenceError outside the existence region.
double solve_t(int n, double a, double h);

PantographShape pantograph_shape(int n, double a, double h);
DeltaFactors delta(int n, double a, double h);

/// Limit of Delta as h -> 0+ for 1 < a < sqrt 2:
/// (2/a^2 - 1)(2(n + 1)/a^2 - 1).
double delta_limit_small_h(int n, double a);

/// h_n^0(a) = n a sqrt(a^2 - 2) for a >= sqrt 2; the lower edge of the
/// positive-Delta region (0 below sqrt 2).
double delta_zero_curve(int n, double a);

/// (1 + cos(j pi / k)) / 2, for 1 <= j <= k - 1.
double resonance_constant(int j, int k);

struct ResonanceLevel {
    int k = 0;
    int j = 0;
    double c = 0;
};

/// Distinct resonance levels c_jk for 2 <= k <= max(q, 2), reduced j/k,
/// sorted by c.
std::vector<ResonanceLevel> resonance_levels(int q);

StabilityReport classify_delta(double delta, int max_resonance_order,
                               const ToleranceSet& tol = default_tolerances());
StabilityReport classify(int n, double a, double h, int max_resonance_order,
                         const ToleranceSet& tol = default_tolerances());

/// The a in (1, sqrt 2) with delta_limit_small_h(n, a) = c, 0 < c <= 2n + 1.
double alpha(int n, double c);

/// The h with Delta_n(a, h) = c.
double level_curve_h(int n, double c, double a);

struct HInterval {
    double lo = 0;
    double hi = 0;
};

struct NonresonantStrips {
    std::vector<HInterval> intervals;   ///< ascending, disjoint, adjacent
    std::vector<ResonanceLevel> cuts;   ///< level at each interior cut point
    std::vector<double> cut_h;
};

/// Ellipticity interval of h split at every resonance level up to order q.
NonresonantStrips nonresonant_intervals(int n, double a, int q);

struct ChaosBound {
    double H = 0;
    int n_max = -1;   ///< largest admissible n (-1 when none)
    int argmax = -1;  ///< n attaining H
};

/// H(a) = max over admissible n of h_n^1(a), for 1 < a < sqrt 2.
ChaosBound chaos_bound(double a);
inline double chaos_bound_H(double a) { return chaos_bound(a).H; }

struct IslandInterval {
    int n = 0;
    double lo = 0;       ///< h_n^0(a)
    double hi = 0;       ///< min(h_n^1(a), h_{n+1}^0(a))
    bool nonempty() const { return hi > lo; }
};

/// For a > sqrt 2: one open h-interval of ellipticity per n = 0..n_max.
std::vector<IslandInterval> unbounded_island_intervals(double a, int n_max);

/// Construct and Newton-refine the full periodic orbit.
PantographOrbit materialize_orbit(int n, double a, double h,
                                  const ToleranceSet& tol = default_tolerances());

/// (-1)^n trace of DT^(2+n) at P: the trace of the half-map, which the
/// closed form predicts to be 4 Delta - 2.
double numeric_half_trace(const StadiumParams& params, const PantographOrbit& orbit,
                          const ToleranceSet& tol = default_tolerances());

} // namespace stadion

#endif
