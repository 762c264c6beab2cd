#include "tubeform/integrate.hpp"

#include "tubeform/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tubeform {

namespace {

QuadratureRule axis_rule(int n, double a, double b, bool periodic)
{
    return periodic ? periodic_trapezoid(n, a, b) : gauss_legendre(n, a, b);
}

} // namespace

SampledSurface sample_surface(const Surface& s)
{
    std::vector<SurfaceSample> samples;
    const int n = s.resolution();
    for (int ci = 0; ci < static_cast<int>(s.charts().size()); ++ci) {
        const Chart& c = s.chart(ci);
        const QuadratureRule ru = axis_rule(n, c.u0, c.u1, c.periodic_u);
        const QuadratureRule rv = axis_rule(n, c.v0, c.v1, c.periodic_v);
        for (std::size_t i = 0; i < ru.size(); ++i) {
            for (std::size_t j = 0; j < rv.size(); ++j) {
                const ChartLocation at{ci, ru.nodes[i], rv.nodes[j]};
                samples.push_back({at, ru.weights[i] * rv.weights[j], point_data(s, at)});
            }
        }
    }
    return SampledSurface(s.space(), std::move(samples));
}

SurfaceIntegrals surface_integrals(const SampledSurface& sampled)
{
    SurfaceIntegrals out;
    out.area = sampled.area();
    out.total_mean = sampled.total_mean_curvature();
    out.total_gauss = sampled.total_gauss_curvature();
    const double quotient = out.total_gauss / (2.0 * std::numbers::pi);
    out.euler_char = 2 * static_cast<int>(std::lround(0.5 * quotient));
    out.euler_residual = std::abs(quotient - out.euler_char);
    if (!(out.euler_residual <= 1e-3))
        throw QuadratureFailure("Gauss-Bonnet quotient " + std::to_string(quotient) +
                                " does not round to an even integer; raise the resolution");
    return out;
}

SurfaceIntegrals surface_integrals(const Surface& s)
{
    return surface_integrals(sample_surface(s));
}

} // namespace tubeform
