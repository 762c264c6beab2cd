#include "tubeform/tube.hpp"

#include "tubeform/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tubeform {

namespace {

using std::numbers::pi;

// sin t cos t and the chi coefficient (t - sin t cos t) on S^3, or
// sinh t cosh t and (sinh t cosh t - t) on H^3.
struct TubeCoefficients {
    double area;  // coefficient of A
    double mean;  // coefficient of the total mean curvature (before the sign)
    double euler; // coefficient of pi chi
};

TubeCoefficients coefficients(int k, double t)
{
    const double s = sk(t, k);
    const double c = ck(t, k);
    const double sc = s * c;
    return {sc, s * s, k == 1 ? t - sc : sc - t};
}

void check_chi(int chi)
{
    if (chi > 2 || chi % 2 != 0)
        throw InvalidInput("Euler characteristic of a closed orientable surface must be even and <= 2, got " +
                           std::to_string(chi));
}

} // namespace

double parallel_jacobian(double lambda1, double lambda2, int k, double t)
{
    const double s = sk(t, k);
    const double c = ck(t, k);
    return (c - lambda1 * s) * (c - lambda2 * s);
}

double parallel_mean_curvature(double lambda1, double lambda2, int k, double t)
{
    for (double lambda : {lambda1, lambda2}) {
        if (!(t < focal_distance(lambda, k, Side::plus)))
            throw FocalSingularity("offset " + std::to_string(t) + " reaches the focal distance of curvature " +
                                   std::to_string(lambda));
    }
    const double s = sk(t, k);
    const double c = ck(t, k);
    auto term = [&](double lambda) { return (k * s + lambda * c) / (c - lambda * s); };
    return 0.5 * (term(lambda1) + term(lambda2));
}

double parallel_area(const SampledSurface& sampled, double t, Side side)
{
    if (side == Side::both)
        throw InvalidInput("parallel area needs a definite side");
    const int k = sampled.space().k();
    const double sign = side_sign(side);
    return sampled.integrate([&](const PointData& p) {
        const double l1 = sign * p.lambda1;
        const double l2 = sign * p.lambda2;
        if (t > 0.0 && !(t < std::min(focal_distance(l1, k, Side::plus), focal_distance(l2, k, Side::plus))))
            throw FocalSingularity("parallel surface at distance " + std::to_string(t) + " passes a focal point");
        return parallel_jacobian(l1, l2, k, t);
    });
}

double parallel_area(const Surface& s, double t, Side side)
{
    return parallel_area(sample_surface(s), t, side);
}

double tube_volume_closed(const SurfaceIntegrals& I, int k, double t, Side side)
{
    if (side == Side::both)
        return tube_volume_both(I, k, t);
    const TubeCoefficients c = coefficients(k, t);
    return pi * I.euler_char * c.euler + c.area * I.area - side_sign(side) * c.mean * I.total_mean;
}

double tube_volume_both(const SurfaceIntegrals& I, int k, double t)
{
    const TubeCoefficients c = coefficients(k, t);
    return 2.0 * pi * I.euler_char * c.euler + 2.0 * c.area * I.area;
}

TubeVolumes tube_volumes(const SurfaceIntegrals& I, int k, double t, const FocalReport& focal)
{
    constexpr double slack = 1e-12;
    TubeVolumes v;
    v.t = t;
    v.vol_plus = tube_volume_closed(I, k, t, Side::plus);
    v.vol_minus = tube_volume_closed(I, k, t, Side::minus);
    v.vol_both = tube_volume_both(I, k, t);
    v.outside_plus = t > focal.rho_plus + slack;
    v.outside_minus = t > focal.rho_minus + slack;
    v.outside_both = t > focal.rho + slack;
    return v;
}

double tube_volume_coarea(const SampledSurface& sampled, double t, Side side, int panels)
{
    if (panels < 1)
        throw InvalidInput("coarea integration needs at least one panel");
    if (!(t >= 0.0))
        throw InvalidInput("tube radius must be non-negative");
    if (t == 0.0)
        return 0.0;
    CompensatedSum sum;
    const double h = t / panels;
    for (int p = 0; p < panels; ++p) {
        const QuadratureRule rule = gauss_legendre(5, p * h, (p + 1) * h);
        for (std::size_t i = 0; i < rule.size(); ++i)
            sum.add(rule.weights[i] * parallel_area(sampled, rule.nodes[i], side));
    }
    return sum.value();
}

double tube_volume_coarea(const Surface& s, double t, Side side, int panels)
{
    return tube_volume_coarea(sample_surface(s), t, side, panels);
}

MinimalTubeBound tube_volume_upper_bound_minimal(int chi, double t)
{
    check_chi(chi);
    const double sc = std::sin(t) * std::cos(t);
    const double common = 2.0 * pi * chi * (t - 5.0 * sc);
    return {common + 16.0 * pi * sc, common + 32.0 * pi * sc};
}

} // namespace tubeform
