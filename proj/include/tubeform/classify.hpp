#pragma once

#include "tubeform/focal.hpp"
#include "tubeform/integrate.hpp"
#include "tubeform/montecarlo.hpp"

#include <optional>

namespace tubeform {

enum class RadiusSource { focal_set, along_normal };
enum class RadiusScope { rho_plus, rho };

/// Which focal radius feeds the pinching test. The default, the focal-set
/// distance on the plus side, is the conservative reading.
struct RadiusChoice {
    RadiusSource source = RadiusSource::focal_set;
    RadiusScope scope = RadiusScope::rho_plus;
};

const char* to_string(RadiusSource source);
const char* to_string(RadiusScope scope);

double select_radius(const FocalReport& focal, RadiusChoice choice);

struct PinchingVerdict {
    int k = 1;
    double ratio = 0.0; ///< total mean curvature / area
    /// arccot(ratio) on S^3, arccoth(ratio) on H^3; empty when unattainable
    /// (k = -1 and ratio <= 1).
    std::optional<double> threshold;
    RadiusChoice radius_used;
    double radius = 0.0;
    bool certified = false;
    /// radius - threshold; -infinity when the threshold is unattainable.
    double margin = 0.0;
};

/// Sphere-pinching certificate: certified iff the chosen radius is at least
/// the threshold (margin >= -1e-9).
PinchingVerdict pinching_verdict(const SurfaceIntegrals& I, const FocalReport& focal, int k, RadiusChoice choice = {});

/// Euler characteristic solved from a measured plus-side tube volume:
///   S^3: chi = (V - sin t cos t A + sin^2 t int H) / (pi (t - sin t cos t))
///   H^3: chi = (V - sinh t cosh t A + sinh^2 t int H) / (pi (sinh t cosh t - t))
/// Throws IllConditioned when the denominator is below 1e-12.
double euler_from_tube(double vol_plus, double t, double area, double total_mean, int k);

struct EulerEstimate {
    double value;
    double std_error;
};

/// Statistical version for a Monte Carlo volume.
EulerEstimate euler_from_tube(const McEstimate& vol_plus, double t, double area, double total_mean, int k);

struct EqualVolumeResult {
    double difference; ///< vol_plus - vol_minus
    bool zero_mean;    ///< |int H| <= 1e-9 A
    /// zero_mean agrees with |difference| <= 2 S_k(t)^2 1e-9 A.
    bool consistent;
};

EqualVolumeResult equal_volume_test(const SurfaceIntegrals& I, int k, double t);

struct RadiusBound {
    bool vacuous = false;
    double bound = 0.0;    ///< 1/2 arcsin(argument); meaningless when vacuous
    double argument = 0.0; ///< c in sin(2 rho) <= c
    /// sin(2 rho) <= c also holds for 2 rho >= pi - arcsin c; radii at or
    /// beyond this value sit on that second branch.
    double second_branch_from = 0.0;

    bool second_branch_relevant(double rho) const { return !vacuous && rho >= second_branch_from; }
};

/// Upper bound on the two-sided focal radius of a surface in S^3:
///   chi = 2:  1/2 arcsin(2 pi^2 / A)
///   chi <= 0: 1/2 arcsin(pi^2 (2 - chi) / (A - pi chi))
/// An argument above 1 makes the bound vacuous. Throws InvalidInput for odd
/// chi, chi > 2 or A <= 0.
RadiusBound radius_bound_sphere(int chi, double area);

/// The chi <= 0 estimate on its own; rejects chi = 2 (where it degenerates).
RadiusBound radius_bound_genus(int chi, double area);

} // namespace tubeform
