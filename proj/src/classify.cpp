#include "tubeform/classify.hpp"

#include "tubeform/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace tubeform {

namespace {

using std::numbers::pi;

constexpr double kCertifySlack = 1e-9;
// Arguments within this of 1 are treated as exactly 1 (Clifford torus).
constexpr double kArcsinSlack = 1e-12;

double euler_denominator(double t, int k)
{
    const double sc = sk(t, k) * ck(t, k);
    return pi * (k == 1 ? t - sc : sc - t);
}

RadiusBound bound_from_argument(double c)
{
    RadiusBound b;
    b.argument = c;
    if (c > 1.0 + kArcsinSlack) {
        b.vacuous = true;
        return b;
    }
    const double a = std::asin(std::min(1.0, c));
    b.bound = 0.5 * a;
    b.second_branch_from = 0.5 * (pi - a);
    return b;
}

void check_bound_inputs(int chi, double area)
{
    if (chi > 2 || chi % 2 != 0)
        throw InvalidInput("Euler characteristic must be even and <= 2, got " + std::to_string(chi));
    if (!(area > 0.0))
        throw InvalidInput("area must be positive");
}

} // namespace

const char* to_string(RadiusSource source)
{
    return source == RadiusSource::focal_set ? "focal_set" : "along_normal";
}

const char* to_string(RadiusScope scope)
{
    return scope == RadiusScope::rho_plus ? "rho_plus" : "rho";
}

double select_radius(const FocalReport& focal, RadiusChoice choice)
{
    if (choice.source == RadiusSource::focal_set) {
        return choice.scope == RadiusScope::rho_plus
                   ? focal.focal_set_distance_plus
                   : std::min(focal.focal_set_distance_plus, focal.focal_set_distance_minus);
    }
    return choice.scope == RadiusScope::rho_plus ? focal.rho_plus : focal.rho;
}

PinchingVerdict pinching_verdict(const SurfaceIntegrals& I, const FocalReport& focal, int k, RadiusChoice choice)
{
    PinchingVerdict v;
    v.k = SpaceForm::make(k).k();
    v.ratio = I.total_mean / I.area;
    v.radius_used = choice;
    v.radius = select_radius(focal, choice);
    if (k == 1)
        v.threshold = 0.5 * pi - std::atan(v.ratio);
    else if (v.ratio > 1.0)
        v.threshold = std::atanh(1.0 / v.ratio);

    if (!v.threshold) {
        v.margin = -std::numeric_limits<double>::infinity();
        v.certified = false;
        return v;
    }
    v.margin = v.radius - *v.threshold;
    v.certified = v.margin >= -kCertifySlack;
    return v;
}

double euler_from_tube(double vol_plus, double t, double area, double total_mean, int k)
{
    const double denom = euler_denominator(t, k);
    if (!(t > 0.0) || !(std::abs(denom) >= 1e-12))
        throw IllConditioned("tube radius " + std::to_string(t) + " is too small to resolve the Euler characteristic");
    const double s = sk(t, k);
    return (vol_plus - s * ck(t, k) * area + s * s * total_mean) / denom;
}

EulerEstimate euler_from_tube(const McEstimate& vol_plus, double t, double area, double total_mean, int k)
{
    const double value = euler_from_tube(vol_plus.mean, t, area, total_mean, k);
    return {value, vol_plus.std_error / std::abs(euler_denominator(t, k))};
}

EqualVolumeResult equal_volume_test(const SurfaceIntegrals& I, int k, double t)
{
    EqualVolumeResult r;
    const double s = sk(t, k);
    const double sc = s * ck(t, k);
    const double euler = pi * I.euler_char * (k == 1 ? t - sc : sc - t);
    const double plus = euler + sc * I.area - s * s * I.total_mean;
    const double minus = euler + sc * I.area + s * s * I.total_mean;
    r.difference = plus - minus;
    r.zero_mean = std::abs(I.total_mean) <= 1e-9 * I.area;
    // At t = 0 both sides vanish and the test carries no information.
    r.consistent = s == 0.0 || r.zero_mean == (std::abs(r.difference) <= 2.0 * s * s * 1e-9 * I.area);
    return r;
}

RadiusBound radius_bound_sphere(int chi, double area)
{
    check_bound_inputs(chi, area);
    if (chi == 2)
        return bound_from_argument(2.0 * pi * pi / area);
    return radius_bound_genus(chi, area);
}

RadiusBound radius_bound_genus(int chi, double area)
{
    check_bound_inputs(chi, area);
    if (chi > 0)
        throw InvalidInput("the genus estimate applies to chi <= 0 only; use the sphere estimate for chi = 2");
    return bound_from_argument(pi * pi * (2 - chi) / (area - pi * chi));
}

} // namespace tubeform
