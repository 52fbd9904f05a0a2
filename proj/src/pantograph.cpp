#include "stadion/pantograph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "stadion/error.hpp"

namespace stadion {

namespace {

const double kSqrt2 = std::numbers::sqrt2;

void check_parameters(int n, double a, double h)
{
    if (n < 0)
        throw DomainError("crossing index n must be non-negative");
    if (!std::isfinite(a) || !(a > 1.0))
        throw DomainError("major semi-axis a must exceed 1");
    if (!std::isfinite(h) || !(h > 0.0))
        throw DomainError("pantographic orbits need h > 0");
}

// Right-hand side of the t-equation and its derivative, in forms that stay
// accurate for large t.
double t_rhs(int n, double a, double h, double t)
{
    const double A = 0.5 * (a * t - 1.0 / (a * t));
    const double B = ((a * a - 2.0) * t - 1.0 / t) / (2.0 * std::sqrt(1.0 + t * t));
    return h * A + B - n;
}

double t_rhs_derivative(double a, double h, double t)
{
    const double dA = 0.5 * (a + 1.0 / (a * t * t));
    const double w = std::sqrt(1.0 + t * t);
    const double num = (a * a - 2.0) * t - 1.0 / t;
    const double dB = ((a * a - 2.0 + 1.0 / (t * t)) * w - num * t / w) / (2.0 * (1.0 + t * t));
    return h * dA + dB;
}

// Bisection on a sign change f(lo) <= 0 < f(hi) of an increasing function,
// to full double resolution.
template <class F>
double bisect_increasing(F&& f, double lo, double hi, bool geometric)
{
    for (int it = 0; it < 4000; ++it) {
        const double mid = (geometric && lo > 0 && hi > 4 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi))
            break;
        if (f(mid) > 0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::string_view stability_name(StabilityClass c) noexcept
{
    switch (c) {
    case StabilityClass::Elliptic: return "Elliptic";
    case StabilityClass::Hyperbolic: return "Hyperbolic";
    case StabilityClass::Parabolic: return "Parabolic";
    case StabilityClass::Resonant: return "Resonant";
    }
    return "?";
}

std::string StabilityReport::label() const
{
    std::string s(stability_name(cls));
    if (cls == StabilityClass::Resonant)
        s += "(" + std::to_string(resonance_k) + "," + std::to_string(resonance_j) + ")";
    return s;
}

double t_equation_residual(int n, double a, double h, double t) { return t_rhs(n, a, h, t); }

double existence_threshold(int n, double a)
{
    if (n < 0 || !(a > 1.0))
        throw DomainError("existence_threshold needs n >= 0 and a > 1");
    if (n <= 1 || a <= 2.0)
        return 0.0;
    return (n - 1) * std::sqrt(a * (a - 2.0));
}

bool pantograph_exists(int n, double a, double h)
{
    return n >= 0 && a > 1.0 && h > 0.0 && std::isfinite(h) && h > existence_threshold(n, a);
}

double solve_t(int n, double a, double h)
{
    check_parameters(n, a, h);
    if (!(h > existence_threshold(n, a)))
        throw ExistenceError("Pan(" + std::to_string(n) + ", a, h) does not exist: h <= " +
                             std::to_string(existence_threshold(n, a)));

    auto f = [&](double t) { return t_rhs(n, a, h, t); };
    const double lo = 1.0 / a;
    double hi = 2.0 / a;
    while (!(f(hi) > 0)) {
        hi *= 2.0;
        if (!std::isfinite(hi) || hi > 1e300)
            throw ConvergenceError("no bracket for the t-equation");
    }
    double t = bisect_increasing(f, lo, hi, true);

    // Newton polish, accepted only while the residual shrinks.
    for (int it = 0; it < 4; ++it) {
        const double r = f(t);
        if (r == 0.0)
            break;
        const double next = t - r / t_rhs_derivative(a, h, t);
        if (!(next > lo) || !(std::fabs(f(next)) < std::fabs(r)))
            break;
        t = next;
    }
    return t;
}

PantographShape pantograph_shape(int n, double a, double h)
{
    PantographShape s;
    const double t = solve_t(n, a, h);
    s.t = t;
    s.lambda = std::atan(t);
    const double w = std::sqrt(1.0 + t * t);
    const double sn = t / w, cs = 1.0 / w;
    s.beta = std::atan(1.0 / (a * t));
    s.cos_beta = a * t / std::sqrt(1.0 + a * a * t * t);
    s.K = ellipse_curvature(a, s.lambda);
    s.l1 = 2.0 * sn;
    s.l2 = 2.0 * std::hypot(h + a * cs, n + sn);
    s.factors.delta1 = s.l1 * s.K / s.cos_beta - 1.0;
    s.factors.delta2 = s.l2 * s.K / s.cos_beta - 1.0;
    s.factors.delta = s.factors.delta1 * s.factors.delta2;
    return s;
}

DeltaFactors delta(int n, double a, double h) { return pantograph_shape(n, a, h).factors; }

double delta_limit_small_h(int n, double a)
{
    const double u = 2.0 / (a * a);
    return (u - 1.0) * ((n + 1) * u - 1.0);
}

double delta_zero_curve(int n, double a)
{
    if (a < kSqrt2)
        return 0.0;
    return n * a * std::sqrt(std::fmax(a * a - 2.0, 0.0));
}

double resonance_constant(int j, int k)
{
    if (k < 2 || j < 1 || j > k - 1)
        throw DomainError("resonance constant needs 1 <= j <= k - 1, k >= 2");
    return 0.5 * (1.0 + std::cos(j * std::numbers::pi / k));
}

std::vector<ResonanceLevel> resonance_levels(int q)
{
    std::vector<ResonanceLevel> out;
    for (int k = 2; k <= std::max(q, 2); ++k)
        for (int j = 1; j < k; ++j)
            if (std::gcd(j, k) == 1)
                out.push_back({k, j, resonance_constant(j, k)});
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.c < y.c; });
    return out;
}

StabilityReport classify_delta(double Delta, int q, const ToleranceSet& tol)
{
    StabilityReport r;
    r.delta = Delta;
    r.half_trace = 4.0 * Delta - 2.0;
    r.phi = std::nan("");
    if (Delta >= -tol.parabolic && Delta <= 1.0 + tol.parabolic) {
        r.phi = std::acos(std::clamp(2.0 * Delta - 1.0, -1.0, 1.0));
        r.mu = std::polar(1.0, 2.0 * r.phi);
    }
    if (std::fabs(Delta) <= tol.parabolic || std::fabs(Delta - 1.0) <= tol.parabolic) {
        r.cls = StabilityClass::Parabolic;
        return r;
    }
    if (Delta < 0.0 || Delta > 1.0) {
        r.cls = StabilityClass::Hyperbolic;
        r.mu = {};
        const double ht = r.half_trace;
        // real eigenvalue of the full map (half-map eigenvalue squared)
        const double ev = 0.5 * (std::fabs(ht) + std::sqrt(ht * ht - 4.0));
        r.mu = ev * ev;
        return r;
    }
    for (int k = 2; k <= std::max(q, 2); ++k)
        for (int j = 1; j < k; ++j)
            if (std::fabs(Delta - resonance_constant(j, k)) <= tol.resonance) {
                r.cls = StabilityClass::Resonant;
                const int g = std::gcd(j, k);
                r.resonance_k = k / g;
                r.resonance_j = j / g;
                return r;
            }
    r.cls = StabilityClass::Elliptic;
    return r;
}

StabilityReport classify(int n, double a, double h, int q, const ToleranceSet& tol)
{
    return classify_delta(delta(n, a, h).delta, q, tol);
}

double alpha(int n, double c)
{
    if (n < 0)
        throw DomainError("n must be non-negative");
    if (!(c > 0.0) || c > 2.0 * n + 1.0)
        throw DomainError("alpha needs 0 < c <= 2n + 1");
    if (c == 2.0 * n + 1.0)
        return 1.0;
    // delta_limit_small_h is strictly decreasing on (1, sqrt 2)
    auto f = [&](double a) { return c - delta_limit_small_h(n, a); };
    return bisect_increasing(f, 1.0, kSqrt2, false);
}

double level_curve_h(int n, double c, double a)
{
    if (n < 0 || !(a > 1.0) || !std::isfinite(a))
        throw DomainError("level curve needs n >= 0 and a > 1");
    if (!(c >= 0.0) || !std::isfinite(c))
        throw DomainError("level curve needs c >= 0");
    double lo;
    if (a < kSqrt2) {
        if (!(delta_limit_small_h(n, a) < c))
            throw DomainError("no level crossing: a <= alpha_n^c");
        lo = 0.0;
    } else {
        lo = delta_zero_curve(n, a);
        if (c == 0.0)
            return lo;
    }
    auto f = [&](double h) { return delta(n, a, h).delta - c; };
    double hi = std::fmax(1.0, 2.0 * lo);
    while (!(f(hi) > 0)) {
        hi *= 2.0;
        if (hi > 1e12)
            throw ConvergenceError("level curve bracket did not close");
    }
    return bisect_increasing(f, lo, hi, false);
}

NonresonantStrips nonresonant_intervals(int n, double a, int q)
{
    if (!(a > 1.0) || n < 0)
        throw DomainError("nonresonant_intervals needs n >= 0, a > 1");
    const bool below = a < kSqrt2;
    const double floor_level = below ? delta_limit_small_h(n, a) : 0.0;
    if (below && !(floor_level < 1.0))
        throw DomainError("empty ellipticity region: a <= alpha_n^1");

    NonresonantStrips out;
    double lo = below ? 0.0 : delta_zero_curve(n, a);
    for (const auto& lvl : resonance_levels(q)) {
        if (lvl.c <= floor_level)
            continue;
        const double hc = level_curve_h(n, lvl.c, a);
        out.intervals.push_back({lo, hc});
        out.cuts.push_back(lvl);
        out.cut_h.push_back(hc);
        lo = hc;
    }
    out.intervals.push_back({lo, level_curve_h(n, 1.0, a)});
    return out;
}

ChaosBound chaos_bound(double a)
{
    if (!(a > 1.0) || !(a < kSqrt2))
        throw DomainError("chaos bound H(a) is defined for 1 < a < sqrt 2");
    ChaosBound out;
    out.n_max = static_cast<int>(std::floor(2.0 * (a * a - 1.0) / (2.0 - a * a)));
    for (int n = 0; n <= out.n_max; ++n) {
        if (!(delta_limit_small_h(n, a) < 1.0))
            continue;
        const double h1 = level_curve_h(n, 1.0, a);
        if (out.argmax < 0 || h1 > out.H) {
            out.H = h1;
            out.argmax = n;
        }
    }
    return out;
}

std::vector<IslandInterval> unbounded_island_intervals(double a, int n_max)
{
    if (!(a > kSqrt2) || !std::isfinite(a))
        throw DomainError("unbounded island intervals need a > sqrt 2");
    if (n_max < 0)
        throw DomainError("n_max must be non-negative");
    std::vector<IslandInterval> out;
    for (int n = 0; n <= n_max; ++n) {
        IslandInterval iv;
        iv.n = n;
        iv.lo = delta_zero_curve(n, a);
        iv.hi = std::fmin(level_curve_h(n, 1.0, a), delta_zero_curve(n + 1, a));
        out.push_back(iv);
    }
    return out;
}

namespace {

PhasePoint refine_periodic(const StadiumParams& params, PhasePoint x, int period, const ToleranceSet& tol)
{
    auto residual = [&](PhasePoint p) {
        const PhasePoint y = iterate(params, p, period, tol);
        return Vec2{arclength_difference(params, y.s, p.s), y.beta - p.beta};
    };
    Vec2 F = residual(x);
    for (int it = 0; it < 30; ++it) {
        const double r = norm(F);
        if (r < 1e-15)
            break;
        const Mat2 J = monodromy(params, x, period, tol).m - Mat2::identity();
        if (std::fabs(J.det()) < 1e-12)
            break;
        const Vec2 dx = J.inverse() * F;
        const PhasePoint cand{wrap_arclength(params, x.s - dx.x), x.beta - dx.y};
        const Vec2 Fc = residual(cand);
        if (!(norm(Fc) < r))
            break;
        x = cand;
        F = Fc;
    }
    return x;
}

// Orbit pattern: two impacts per half-ellipse joined by vertical chords,
// 2n segment impacts, and x monotone between the two vertical chords.
void verify_pattern(const PantographOrbit& orb)
{
    const int p = orb.period();
    int right = 0, left = 0, flat = 0;
    for (Piece pc : orb.pieces) {
        right += pc == Piece::RightEllipse;
        left += pc == Piece::LeftEllipse;
        flat += !is_ellipse(pc);
    }
    if (right != 2 || left != 2 || flat != 2 * orb.n)
        throw RefinementError("orbit does not have the pantographic impact pattern");
    int vertical = 0, turns = 0, last_sign = 0;
    for (int k = 0; k < p; ++k) {
        const double dx = orb.positions[(k + 1) % p].x - orb.positions[k].x;
        if (std::fabs(dx) < 1e-9) {
            ++vertical;
            if (!(is_ellipse(orb.pieces[k]) && orb.pieces[k] == orb.pieces[(k + 1) % p]))
                throw RefinementError("vertical chord not within one half-ellipse");
            continue;
        }
        const int sign = dx > 0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign)
            ++turns;
        last_sign = sign;
    }
    if (vertical != 2 || turns != 1)
        throw RefinementError("orbit crosses some vertical line more than twice");
}

} // namespace

PantographOrbit materialize_orbit(int n, double a, double h, const ToleranceSet& tol)
{
    PantographOrbit orb;
    orb.n = n;
    orb.a = a;
    orb.h = h;
    orb.shape = pantograph_shape(n, a, h);
    const StadiumParams params = build_stadium(a, h);
    const int p = orb.period();

    PhasePoint x{params.ellipse_arc(orb.shape.lambda), -orb.shape.beta};
    x = refine_periodic(params, x, p, tol);
    orb.closure = closure_residual(params, x, p, tol);
    if (!(orb.closure <= tol.closure))
        throw RefinementError("periodic orbit did not close: residual " + std::to_string(orb.closure));

    PhasePoint cur = x;
    for (int k = 0; k < p; ++k) {
        const BoundaryPoint bp = point_at(params, cur.s);
        orb.impacts.push_back(cur);
        orb.positions.push_back(bp.position);
        orb.pieces.push_back(bp.piece);
        cur = step(params, cur, tol);
    }
    verify_pattern(orb);
    return orb;
}

double numeric_half_trace(const StadiumParams& params, const PantographOrbit& orbit, const ToleranceSet& tol)
{
    const double tr = monodromy(params, orbit.start(), 2 + orbit.n, tol).m.trace();
    return orbit.n % 2 == 0 ? tr : -tr;
}

} // namespace stadion
