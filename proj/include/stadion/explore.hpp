#ifndef STADION_EXPLORE_HPP
#define STADION_EXPLORE_HPP

// Phase-space sampling, island probing and a Lyapunov indicator.

#include <cstdint>
#include <optional>
#include <vector>

#include "stadion/dynamics.hpp"
#include "stadion/error.hpp"
#include "stadion/geometry.hpp"
#include "stadion/tolerances.hpp"

namespace stadion {

struct PortraitSpec {
    StadiumParams params;
    std::vector<PhasePoint> seeds;   ///< explicit seeds, used before random ones
    int random_seeds = 0;            ///< extra seeds uniform in (s, sin beta)
    std::uint64_t rng_seed = 1;
    int iterations = 1000;           ///< recorded iterates per seed
    int skip = 0;                    ///< transient iterates dropped first
    int workers = 1;
};

struct OrbitTrace {
    int seed_id = 0;
    PhasePoint seed;
    std::vector<PhasePoint> points;  ///< recorded iterates (after the transient)
    bool truncated = false;
    std::optional<ErrorCode> stop;   ///< why the orbit was truncated
};

/// `count` points uniform in [0, L) x (-1, 1) in (s, sin beta), as (s, beta).
/// The generator is mt19937_64 with doubles built from the top 53 bits.
std::vector<PhasePoint> sample_seeds(const StadiumParams& params, int count, std::uint64_t rng_seed);

/// Orbit traces in seed order; explicit seeds first.
std::vector<OrbitTrace> phase_portrait(const PortraitSpec& spec,
                                       const ToleranceSet& tol = default_tolerances());

/// Diameter of a set of phase points in (s, sin beta), each coordinate as a
/// fraction of its range (s circularly over L, sin beta over 2); the larger
/// of the two.
double phase_diameter(const StadiumParams& params, const std::vector<PhasePoint>& pts);

/// Smallest p <= max_period such that every residue class mod p of the
/// trace has phase_diameter below `fraction`: the trace then stays near a
/// p-periodic chain of islands.
std::optional<int> island_period(const StadiumParams& params, const OrbitTrace& trace,
                                 int max_period = 32, double fraction = 0.05);

/// Smallest p <= max_period with closure residual below tol.closure.
std::optional<int> detect_period(const StadiumParams& params, PhasePoint p, int max_period = 64,
                                 const ToleranceSet& tol = default_tolerances());

enum class ProbeVerdict { Bounded, Escaping };
std::string_view probe_verdict_name(ProbeVerdict v) noexcept;

struct ProbeRing {
    double radius = 0;
    ProbeVerdict verdict = ProbeVerdict::Escaping;
    int escaped = 0;      ///< seeds that left 3 radius
    int truncated = 0;    ///< seeds lost to grazing or corner hits (counted as escaped)
};

struct ProbeReport {
    int period = 0;
    bool elliptic_chart = false;    ///< normalized chart (else plain (s, sin beta))
    std::vector<ProbeRing> rings;
    double largest_bounded = 0;     ///< 0 when no ring is bounded
};

/// Seeds on circles of the given radii around a periodic point, iterated
/// under the return map. Elliptic centers use the normalized chart of the
/// linear part, others Euclidean (s, sin beta). Throws RefinementError if
/// `center` is not periodic.
ProbeReport island_probe(const StadiumParams& params, PhasePoint center, const std::vector<double>& radii,
                         int iterations, int seeds_per_ring = 8,
                         const ToleranceSet& tol = default_tolerances());

struct LyapunovResult {
    double value = 0;
    int iterations = 0;   ///< completed before any truncation
    bool truncated = false;
};

/// (1/N) log of the spectral norm of the N-step derivative in (s, sin beta),
/// accumulated with periodic renormalization. The product has determinant 1,
/// so the value is >= 0.
LyapunovResult lyapunov_indicator(const StadiumParams& params, PhasePoint p, int iterations,
                                  const ToleranceSet& tol = default_tolerances());

} // namespace stadion

#endif
