#pragma once

#include "tubeform/quadrature.hpp"
#include "tubeform/surface.hpp"

#include <vector>

namespace tubeform {

struct SurfaceIntegrals {
    double area = 0.0;
    double total_mean = 0.0;  ///< integral of H d sigma
    double total_gauss = 0.0; ///< integral of K d sigma
    int euler_char = 0;
    /// |total_gauss / 2 pi - euler_char|
    double euler_residual = 0.0;
};

/// One quadrature node: parameter location, tensor-product rule weight and
/// the full curvature record there.
struct SurfaceSample {
    ChartLocation at;
    double weight;
    PointData data;

    double dsigma() const { return weight * data.area_element; }
};

/// The surface evaluated once on its quadrature grid: trapezoidal nodes on
/// periodic axes, Gauss-Legendre on the others, resolution nodes per axis
/// and chart. Integrals over M of pointwise functions of PointData reuse it.
class SampledSurface {
public:
    SampledSurface(SpaceForm space, std::vector<SurfaceSample> samples)
        : space_(space), samples_(std::move(samples))
    {
    }

    const SpaceForm& space() const { return space_; }
    const std::vector<SurfaceSample>& samples() const { return samples_; }

    template <typename F>
    double integrate(F&& integrand) const
    {
        CompensatedSum sum;
        for (const SurfaceSample& s : samples_)
            sum.add(integrand(s.data) * s.dsigma());
        return sum.value();
    }

    double area() const
    {
        return integrate([](const PointData&) { return 1.0; });
    }
    double total_mean_curvature() const
    {
        return integrate([](const PointData& p) { return p.H; });
    }
    double total_gauss_curvature() const
    {
        return integrate([](const PointData& p) { return p.K; });
    }

private:
    SpaceForm space_;
    std::vector<SurfaceSample> samples_;
};

SampledSurface sample_surface(const Surface& s);

/// Area, total mean and Gauss curvature, and the Euler characteristic as the
/// even integer nearest to the Gauss-Bonnet quotient. Throws
/// QuadratureFailure when that quotient is more than 1e-3 from it.
SurfaceIntegrals surface_integrals(const SampledSurface& sampled);
SurfaceIntegrals surface_integrals(const Surface& s);

} // namespace tubeform
