#ifndef STADION_TOLERANCES_HPP
#define STADION_TOLERANCES_HPP

namespace stadion {

/// Every numerical threshold used by the library, in one place.
/// Defaults are the values the test suites are pinned against.
struct ToleranceSet {
    double graze = 1e-9;       ///< refuse |beta| within this of pi/2
    double corner = 1e-10;     ///< refuse impacts within this arc length of a junction
    double chord_min = 1e-12;  ///< minimum ray parameter, relative to the perimeter
    double parabolic = 1e-9;   ///< band around Delta in {0, 1}
    double resonance = 1e-9;   ///< band around Delta = c_jk (and |mu^k - 1|)
    double closure = 1e-9;     ///< accepted periodic-orbit closure residual
    double jet_agreement = 1e-5;
};

inline const ToleranceSet& default_tolerances()
{
    static const ToleranceSet t{};
    return t;
}

} // namespace stadion

#endif
