#ifndef STADION_NORMALFORM_HPP
#define STADION_NORMALFORM_HPP

// Birkhoff normal form of an area-preserving planar map near an elliptic
// fixed point, and the twist coefficients tau_m of
//
//   zeta -> mu zeta exp(i (tau_1 |zeta|^2 + tau_2 |zeta|^4 + ...)).
//
// zeta is the complex coordinate in which the linear part is a rotation and
// the area form is standard: x = v zeta + conj(v zeta) with
// v1 conj(v2) - v2 conj(v1) = i/2, so (Re zeta, Im zeta) are canonical and
// carry the orientation of the input chart.

#include <complex>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "stadion/dynamics.hpp"
#include "stadion/pantograph.hpp"
#include "stadion/taylor.hpp"
#include "stadion/tolerances.hpp"

namespace stadion {

/// Coordinates of a jet. Canonical: already area-preserving (fixtures).
/// BilliardAngle: (s, beta) deviations, converted to (s, sin beta) before
/// normalization.
enum class JetChart { Canonical, BilliardAngle };

/// Jet of a map at a fixed point, as polynomials in the two input deviations.
struct Jet2 {
    int order = 0;
    Jet x;   ///< first output component minus the fixed point
    Jet y;   ///< second output component minus the fixed point
    JetChart chart = JetChart::Canonical;
    double beta0 = 0;   ///< angle at the fixed point (BilliardAngle chart)

    Mat2 linear() const;
    /// Size of the constant term (distance of the image of the center from it).
    double offset() const;
};

enum class JetMethod { FiniteDifference, Series };
std::string_view jet_method_name(JetMethod m) noexcept;

/// A planar map given both in double and in jet arithmetic. apply_jet may be
/// empty, in which case only finite differences are available.
struct PlanarMap {
    std::function<Vec2(Vec2)> apply;
    std::function<std::array<Jet, 2>(const Jet&, const Jet&)> apply_jet;
    JetChart chart = JetChart::Canonical;
};

/// Jet of f at `center` (translated so the center maps to the origin).
/// `scale` is the largest perturbation over which f is smooth, used to
/// calibrate finite-difference steps.
Jet2 map_jet(const PlanarMap& f, Vec2 center, int order, JetMethod method, double scale = 1.0);

/// Jet of the (4 + 2n)-th iterate of the billiard map at the orbit's start.
Jet2 return_map_jet(const StadiumParams& params, const PantographOrbit& orbit, int order,
                    JetMethod method, const ToleranceSet& tol = default_tolerances());

/// Largest coefficient difference, relative to max(|a|, |b|, largest
/// coefficient of that degree in either jet).
double jet_discrepancy(const Jet2& a, const Jet2& b);

struct JetPair {
    Jet2 series;
    Jet2 finite_difference;
    double discrepancy = 0;
};

/// Both jets; throws JetDisagreementError beyond tol.jet_agreement.
JetPair cross_validated_jet(const StadiumParams& params, const PantographOrbit& orbit, int order,
                            const ToleranceSet& tol = default_tolerances());

/// Linear symplectic normalization of a 2x2 elliptic matrix.
struct LinearNormalization {
    std::complex<double> mu;   ///< eigenvalue acting as zeta -> mu zeta
    std::complex<double> v1;   ///< eigenvector, x = v zeta + conj(v zeta)
    std::complex<double> v2;

    /// zeta = -2i (x1 conj(v2) - x2 conj(v1))
    std::complex<double> to_zeta(Vec2 x) const;
    Vec2 from_zeta(std::complex<double> z) const;
};

/// Throws NotEllipticError when |trace| >= 2 or det is not close to 1.
LinearNormalization normalize_linear(const Mat2& m);

enum class TwistVerdict { IslandCertified, Inconclusive, ResonantSkip };
std::string_view verdict_name(TwistVerdict v) noexcept;

struct TwistReport {
    std::complex<double> mu;
    double rotation_number = 0;     ///< arg(mu) / 2pi in [0, 1)
    int q = 4;
    std::vector<int> resonances;    ///< k <= q with |mu^k - 1| < tol
    std::vector<double> taus;       ///< tau_1 .. tau_s, s = q/2 - 1
    std::vector<double> tau_noise;  ///< per-coefficient noise estimate
    double residual_imag = 0;       ///< largest real defect of the resonant coefficients
    double tau1_oracle = std::nan("");
    double oracle_rotation = std::nan("");
    double jet_spread = 0;
    int certified_order = 0;        ///< smallest m with |tau_m| > 10 noise
    TwistVerdict verdict = TwistVerdict::Inconclusive;
    StabilityReport stability;
};

/// Normal form up to degree q - 1 of a jet of order >= q - 1.
/// Verdict is computed with zero noise; callers with a noise estimate
/// should use twist_analysis. Throws ResonanceError when |mu^k - 1| < tol
/// for some k <= q.
TwistReport birkhoff_coefficients(const Jet2& jet, int q,
                                  const ToleranceSet& tol = default_tolerances());

struct RotationFit {
    double slope = 0;          ///< d(rotation angle)/d|zeta|^2, estimates tau_1
    double intercept = 0;      ///< linear rotation angle in (-pi, pi]
    double rotation_number = 0;
    std::vector<double> amplitudes;   ///< averaged |zeta|^2 per radius
    std::vector<double> rotations;    ///< averaged angle per step per radius
};

inline const std::vector<double>& default_oracle_radii()
{
    static const std::vector<double> r{1e-4, 2e-4, 4e-4, 8e-4};
    return r;
}

/// Rotation angle against amplitude of the orbits started at zeta = r in
/// the linear normalized chart, averaged with a smooth Birkhoff weight,
/// fitted by least squares. Throws EscapeError if an orbit leaves 4r.
RotationFit rotation_number_fit(const PlanarMap& f, Vec2 center, const std::vector<double>& radii,
                                int iterations);

/// Same for the return map of a pantographic orbit, in (s, sin beta).
RotationFit rotation_number_fit(const StadiumParams& params, const PantographOrbit& orbit,
                                const std::vector<double>& radii, int iterations,
                                const ToleranceSet& tol = default_tolerances());

struct TwistOptions {
    int q = 4;
    bool retry = true;     ///< on Inconclusive, try q + 2 (up to 6)
    bool oracle = true;
    std::vector<double> oracle_radii = default_oracle_radii();
    int oracle_iterations = 2000;
};

/// Full pipeline for Pan(n, a, h). Resonant centers give ResonantSkip;
/// non-elliptic ones throw NotEllipticError.
TwistReport twist_analysis(int n, double a, double h, const TwistOptions& opt = {},
                           const ToleranceSet& tol = default_tolerances());

/// Return map of a pantographic orbit in (s, sin beta) deviations-free
/// absolute coordinates, for probing and fits.
PlanarMap pantograph_return_map(const StadiumParams& params, int period,
                                const ToleranceSet& tol = default_tolerances());

} // namespace stadion

#endif
