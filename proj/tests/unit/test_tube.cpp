#include "tubeform/catalog.hpp"
#include "tubeform/error.hpp"
#include "tubeform/tube.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tubeform;
using std::numbers::pi;

namespace {

double ball_difference_sphere(double r, double t) { return pi * (2 * t - std::sin(2 * r) + std::sin(2 * (r - t))); }

double ball_difference_hyperbolic(double r, double t)
{
    return pi * (std::sinh(2 * r) - 2 * r) - pi * (std::sinh(2 * (r - t)) - 2 * (r - t));
}

} // namespace

TEST(Tube, JacobianExamples)
{
    EXPECT_EQ(parallel_jacobian(2.0, -3.0, 1, 0.0), 1.0);
    for (double t : {0.1, 0.5, 0.7})
        EXPECT_NEAR(parallel_jacobian(-1.0, 1.0, 1, t), std::cos(2 * t), 1e-15);
    const double r = 1.1;
    for (double t : {0.2, 0.8})
        EXPECT_NEAR(parallel_jacobian(1 / std::tan(r), 1 / std::tan(r), 1, t),
                    std::pow(std::sin(r - t), 2) / std::pow(std::sin(r), 2), 1e-14);
}

TEST(Tube, ParallelMeanCurvature)
{
    const double r = 1.0;
    for (double t : {0.0, 0.3, 0.9}) {
        EXPECT_NEAR(parallel_mean_curvature(1 / std::tan(r), 1 / std::tan(r), 1, t), 1 / std::tan(r - t), 1e-12);
        EXPECT_NEAR(parallel_mean_curvature(1 / std::tanh(r), 1 / std::tanh(r), -1, t), 1 / std::tanh(r - t), 1e-12);
    }
    EXPECT_EQ(parallel_mean_curvature(-1.0, 1.0, 1, 0.0), 0.0);
    EXPECT_THROW(parallel_mean_curvature(-1.0, 1.0, 1, pi / 4), FocalSingularity);
    EXPECT_THROW(parallel_mean_curvature(1 / std::tanh(r), 1 / std::tanh(r), -1, 1.2), FocalSingularity);
}

TEST(Tube, JacobianDerivativeIdentity)
{
    // d/dt delta = -2 H_t delta.
    for (int k : {1, -1})
        for (auto [l1, l2] : {std::pair{-0.7, 0.4}, std::pair{0.2, 0.9}, std::pair{-1.5, -0.3}}) {
            const double t = 0.3, h = 1e-5;
            const double d = (parallel_jacobian(l1, l2, k, t + h) - parallel_jacobian(l1, l2, k, t - h)) / (2 * h);
            EXPECT_NEAR(d, -2 * parallel_mean_curvature(l1, l2, k, t) * parallel_jacobian(l1, l2, k, t), 1e-8);
        }
}

TEST(Tube, ParallelArea)
{
    const Surface s = normalize_orientation(geodesic_sphere(1, pi / 3, 32));
    EXPECT_NEAR(parallel_area(s, 0.0, Side::plus), 3 * pi, 1e-10);
    for (double t : {0.2, 0.6})
        EXPECT_NEAR(parallel_area(s, t, Side::plus), 4 * pi * std::pow(std::sin(pi / 3 - t), 2), 1e-10);
    const Surface c = clifford_torus(32);
    for (Side side : {Side::plus, Side::minus})
        EXPECT_NEAR(parallel_area(c, 0.3, side), 2 * pi * pi * std::cos(0.6), 1e-10);
    EXPECT_THROW(parallel_area(c, pi / 4 + 1e-6, Side::plus), FocalSingularity);
}

TEST(Tube, ClosedFormAgainstBallDifference)
{
    for (double r : {0.6, pi / 3, pi / 2}) {
        const SurfaceIntegrals I = surface_integrals(normalize_orientation(geodesic_sphere(1, r, 64)));
        for (double t : {0.1, 0.25, 0.45})
            EXPECT_NEAR(tube_volume_closed(I, 1, t, Side::plus), ball_difference_sphere(r, t), 1e-9);
    }
    for (double r : {0.5, 1.0}) {
        const SurfaceIntegrals I = surface_integrals(normalize_orientation(geodesic_sphere(-1, r, 64)));
        for (double t : {0.1, 0.25, 0.45})
            EXPECT_NEAR(tube_volume_closed(I, -1, t, Side::plus), ball_difference_hyperbolic(r, t), 1e-9);
    }
}

TEST(Tube, CliffordVolumes)
{
    const SurfaceIntegrals I = surface_integrals(clifford_torus(64));
    for (double t : {0.1, 0.5, pi / 4}) {
        EXPECT_NEAR(tube_volume_closed(I, 1, t, Side::plus), pi * pi * std::sin(2 * t), 1e-9);
        EXPECT_NEAR(tube_volume_both(I, 1, t), 2 * pi * pi * std::sin(2 * t), 1e-9);
    }
    EXPECT_NEAR(tube_volume_both(I, 1, pi / 4), 2 * pi * pi, 1e-9);
    for (Side side : {Side::plus, Side::minus, Side::both})
        EXPECT_EQ(tube_volume_closed(I, 1, 0.0, side), 0.0);
}

TEST(Tube, CancellationIdentity)
{
    for (const Surface& s : {perturbed_sphere(1, 1.0, 0.1, 2, 32), perturbed_sphere(-1, 0.8, 0.2, 1, 32)}) {
        const SurfaceIntegrals I = surface_integrals(normalize_orientation(s));
        const int k = s.space().k();
        for (double t : {0.05, 0.4, 1.3}) {
            const double sum = tube_volume_closed(I, k, t, Side::plus) + tube_volume_closed(I, k, t, Side::minus);
            EXPECT_NEAR(sum - tube_volume_both(I, k, t), 0.0, 1e-13 * std::max(1.0, sum));
            EXPECT_EQ(tube_volume_closed(I, k, t, Side::both), tube_volume_both(I, k, t));
        }
    }
}

TEST(Tube, SphereBothSidesSelfConsistent)
{
    const double r = 0.9;
    const SurfaceIntegrals I = surface_integrals(normalize_orientation(geodesic_sphere(1, r, 64)));
    // At t = r the inner side is the whole ball.
    EXPECT_NEAR(tube_volume_closed(I, 1, r, Side::plus), pi * (2 * r - std::sin(2 * r)), 1e-12);
    const double outer = pi * (2 * (2 * r) - std::sin(4 * r)) - pi * (2 * r - std::sin(2 * r));
    EXPECT_NEAR(tube_volume_closed(I, 1, r, Side::minus), outer, 1e-12);
}

TEST(Tube, TubeVolumesFlags)
{
    const Surface s = clifford_torus(32);
    const SurfaceIntegrals I = surface_integrals(s);
    const FocalReport f = focal_radius(s);
    const TubeVolumes in = tube_volumes(I, 1, 0.5, f);
    EXPECT_FALSE(in.outside_plus || in.outside_minus || in.outside_both);
    EXPECT_FALSE(tube_volumes(I, 1, pi / 4, f).outside_both);
    const TubeVolumes out = tube_volumes(I, 1, 1.5, f);
    EXPECT_TRUE(out.outside_plus && out.outside_minus && out.outside_both);
}

TEST(Tube, CoareaOracle)
{
    const Surface c = clifford_torus(64);
    const SurfaceIntegrals I = surface_integrals(c);
    for (double t : {0.2, 0.7})
        EXPECT_NEAR(tube_volume_coarea(c, t, Side::plus), pi * pi * std::sin(2 * t), 1e-10);
    EXPECT_EQ(tube_volume_coarea(c, 0.0, Side::plus), 0.0);
    const Surface g = normalize_orientation(geodesic_sphere(1, pi / 3, 64));
    EXPECT_NEAR(tube_volume_coarea(g, 0.5, Side::plus), ball_difference_sphere(pi / 3, 0.5), 1e-9);
    EXPECT_THROW(tube_volume_coarea(c, 0.9, Side::plus), FocalSingularity);
    (void)I;
}

TEST(Tube, CoareaDerivativeIsParallelArea)
{
    const Surface s = normalize_orientation(perturbed_sphere(1, 1.0, 0.1, 2, 48));
    const SampledSurface sampled = sample_surface(s);
    const double t = 0.3, h = 1e-4;
    const double d = (tube_volume_coarea(sampled, t + h, Side::plus) - tube_volume_coarea(sampled, t - h, Side::plus)) / (2 * h);
    EXPECT_NEAR(d, parallel_area(sampled, t, Side::plus), 1e-6);
}

TEST(Tube, MinimalBound)
{
    for (double t : {0.0, 0.3, 1.0}) {
        const MinimalTubeBound two = tube_volume_upper_bound_minimal(2, t);
        EXPECT_NEAR(two.derived, 4 * pi * t - 4 * pi * std::sin(t) * std::cos(t), 1e-12);
        const MinimalTubeBound zero = tube_volume_upper_bound_minimal(0, t);
        EXPECT_NEAR(zero.derived, 8 * pi * std::sin(2 * t), 1e-12);
        EXPECT_GE(zero.derived, 2 * pi * pi * std::sin(2 * t));
        EXPECT_NEAR(zero.printed, 16 * pi * std::sin(2 * t), 1e-12);
    }
    EXPECT_THROW(tube_volume_upper_bound_minimal(1, 0.1), InvalidInput);
    EXPECT_THROW(tube_volume_upper_bound_minimal(4, 0.1), InvalidInput);
}
