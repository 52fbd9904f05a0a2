#include "stadion/explore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "stadion/normalform.hpp"
#include "stadion/parallel.hpp"

namespace stadion {

namespace {

double unit_double(std::mt19937_64& g)
{
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Longest arc of the circle of length L not containing any of the values.
double circular_spread(std::vector<double> s, double L)
{
    if (s.size() < 2)
        return 0.0;
    std::sort(s.begin(), s.end());
    double gap = s.front() + L - s.back();
    for (std::size_t i = 1; i < s.size(); ++i)
        gap = std::fmax(gap, s[i] - s[i - 1]);
    return L - gap;
}

} // namespace

std::vector<PhasePoint> sample_seeds(const StadiumParams& params, int count, std::uint64_t rng_seed)
{
    std::mt19937_64 g(rng_seed);
    std::vector<PhasePoint> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        const double s = unit_double(g) * params.length();
        const double p = 2.0 * unit_double(g) - 1.0;
        if (p <= -1.0)
            continue;
        out.push_back({s, std::asin(p)});
    }
    return out;
}

std::vector<OrbitTrace> phase_portrait(const PortraitSpec& spec, const ToleranceSet& tol)
{
    if (spec.iterations < 1)
        throw DomainError("portrait needs at least one iteration per seed");
    if (spec.skip < 0 || spec.random_seeds < 0)
        throw DomainError("negative transient or seed count");
    std::vector<PhasePoint> seeds = spec.seeds;
    for (const PhasePoint& p : sample_seeds(spec.params, spec.random_seeds, spec.rng_seed))
        seeds.push_back(p);
    for (const PhasePoint& p : seeds)
        if (!(std::fabs(p.beta) < std::numbers::pi / 2) || !std::isfinite(p.s))
            throw DomainError("seed outside the open annulus");

    return parallel_map<OrbitTrace>(seeds.size(), spec.workers, [&](std::size_t i) {
        OrbitTrace t;
        t.seed_id = static_cast<int>(i);
        t.seed = seeds[i];
        PhasePoint p{wrap_arclength(spec.params, seeds[i].s), seeds[i].beta};
        t.points.reserve(spec.iterations);
        try {
            for (int k = 0; k < spec.skip; ++k)
                p = step(spec.params, p, tol);
            for (int k = 0; k < spec.iterations; ++k) {
                t.points.push_back(p);
                if (k + 1 < spec.iterations)
                    p = step(spec.params, p, tol);
            }
        } catch (const Error& e) {
            t.truncated = true;
            t.stop = e.code();
        }
        return t;
    });
}

double phase_diameter(const StadiumParams& params, const std::vector<PhasePoint>& pts)
{
    if (pts.size() < 2)
        return 0.0;
    std::vector<double> s;
    double lo = INFINITY, hi = -INFINITY;
    for (const PhasePoint& p : pts) {
        s.push_back(p.s);
        const double sp = std::sin(p.beta);
        lo = std::fmin(lo, sp);
        hi = std::fmax(hi, sp);
    }
    return std::fmax(circular_spread(std::move(s), params.length()) / params.length(), (hi - lo) / 2.0);
}

std::optional<int> island_period(const StadiumParams& params, const OrbitTrace& trace, int max_period,
                                 double fraction)
{
    const int n = static_cast<int>(trace.points.size());
    for (int p = 1; p <= max_period && 2 * p <= n; ++p) {
        bool ok = true;
        for (int r = 0; r < p && ok; ++r) {
            std::vector<PhasePoint> cls;
            for (int k = r; k < n; k += p)
                cls.push_back(trace.points[k]);
            ok = phase_diameter(params, cls) < fraction;
        }
        if (ok)
            return p;
    }
    return std::nullopt;
}

std::optional<int> detect_period(const StadiumParams& params, PhasePoint p, int max_period, const ToleranceSet& tol)
{
    PhasePoint q = p;
    for (int k = 1; k <= max_period; ++k) {
        q = step(params, q, tol);
        if (std::hypot(arclength_difference(params, q.s, p.s), q.beta - p.beta) < tol.closure)
            return k;
    }
    return std::nullopt;
}

std::string_view probe_verdict_name(ProbeVerdict v) noexcept
{
    return v == ProbeVerdict::Bounded ? "Bounded" : "Escaping";
}

ProbeReport island_probe(const StadiumParams& params, PhasePoint center, const std::vector<double>& radii,
                         int iterations, int seeds_per_ring, const ToleranceSet& tol)
{
    const auto period = detect_period(params, center, 64, tol);
    if (!period)
        throw RefinementError("probe center is not a periodic point");
    if (iterations < 1 || seeds_per_ring < 1)
        throw DomainError("probe needs positive iteration and seed counts");

    ProbeReport rep;
    rep.period = *period;
    const PlanarMap f = pantograph_return_map(params, rep.period, tol);
    const Vec2 c{center.s, std::sin(center.beta)};

    // chart: normalized rotation coordinates when elliptic
    std::optional<LinearNormalization> ln;
    try {
        ln = normalize_linear(map_jet(f, c, 1, JetMethod::Series).linear());
        rep.elliptic_chart = true;
    } catch (const NotEllipticError&) {
    }
    auto to_chart = [&](Vec2 x) -> std::complex<double> {
        const Vec2 d = x - c;
        return ln ? ln->to_zeta(d) : std::complex<double>(d.x, d.y);
    };
    auto from_chart = [&](std::complex<double> z) -> Vec2 {
        return c + (ln ? ln->from_zeta(z) : Vec2{z.real(), z.imag()});
    };

    for (double r : radii) {
        ProbeRing ring;
        ring.radius = r;
        for (int k = 0; k < seeds_per_ring; ++k) {
            Vec2 x = from_chart(std::polar(r, 2.0 * std::numbers::pi * k / seeds_per_ring));
            try {
                for (int it = 0; it < iterations; ++it) {
                    x = f.apply(x);
                    if (!(std::abs(to_chart(x)) <= 3.0 * r)) {
                        ++ring.escaped;
                        break;
                    }
                }
            } catch (const Error&) {
                ++ring.truncated;
                ++ring.escaped;
            }
        }
        ring.verdict = ring.escaped == 0 ? ProbeVerdict::Bounded : ProbeVerdict::Escaping;
        if (ring.verdict == ProbeVerdict::Bounded)
            rep.largest_bounded = std::fmax(rep.largest_bounded, r);
        rep.rings.push_back(ring);
    }
    return rep;
}

LyapunovResult lyapunov_indicator(const StadiumParams& params, PhasePoint p, int iterations, const ToleranceSet& tol)
{
    if (iterations < 1)
        throw DomainError("lyapunov indicator needs at least one iteration");
    LyapunovResult res;
    Mat2 M = Mat2::identity();
    double logsum = 0;
    try {
        for (int k = 0; k < iterations; ++k) {
            const TangentMatrix t = tangent_matrix(params, p, tol);
            // (s, beta) -> (s, sin beta)
            const Mat2 J = Mat2::diag(1.0, t.cos_to) * t.m * Mat2::diag(1.0, 1.0 / t.cos_from);
            M = J * M;
            p = step(params, p, tol);
            ++res.iterations;
            if (res.iterations % 8 == 0) {
                const double m = M.max_abs();
                logsum += std::log(m);
                M = (1.0 / m) * M;
            }
        }
    } catch (const Error&) {
        res.truncated = true;
    }
    if (res.iterations > 0)
        res.value = std::fmax(0.0, (logsum + std::log(M.norm2())) / res.iterations);
    return res;
}

} // namespace stadion
