#pragma once

#include "tubeform/focal.hpp"
#include "tubeform/integrate.hpp"

namespace tubeform {

/// Jacobian of p -> exp_p(t eta): prod_i (C_k(t) - lambda_i S_k(t)).
double parallel_jacobian(double lambda1, double lambda2, int k, double t);

/// Mean curvature of the parallel surface at distance t, with respect to the
/// transported normal:
///   H_t = 1/2 sum_i (k S_k + lambda_i C_k) / (C_k - lambda_i S_k).
/// Throws FocalSingularity unless t is below both focal distances.
double parallel_mean_curvature(double lambda1, double lambda2, int k, double t);

/// Area of the parallel surface M_t on `side`, as the integral over M of the
/// Jacobian. Throws FocalSingularity when t reaches a focal distance at any
/// quadrature node.
double parallel_area(const SampledSurface& sampled, double t, Side side);
double parallel_area(const Surface& s, double t, Side side);

/// Closed-form Vol(Omega_side^t):
///   S^3: pi chi (t - sin t cos t) + sin t cos t A -+ sin^2 t int H
///   H^3: pi chi (sinh t cosh t - t) + sinh t cosh t A -+ sinh^2 t int H
/// with - for side plus. Side both gives tube_volume_both. The formula is
/// evaluated for any t; meaning past the focal radius is the caller's to flag.
double tube_volume_closed(const SurfaceIntegrals& I, int k, double t, Side side);

/// Vol(Omega^t) for both sides together; the mean-curvature terms cancel.
double tube_volume_both(const SurfaceIntegrals& I, int k, double t);

struct TubeVolumes {
    double t = 0.0;
    double vol_plus = 0.0;
    double vol_minus = 0.0;
    double vol_both = 0.0;
    /// t exceeds rho_plus / rho_minus / rho: the value is outside the
    /// smoothness range of the distance function.
    bool outside_plus = false;
    bool outside_minus = false;
    bool outside_both = false;
};

TubeVolumes tube_volumes(const SurfaceIntegrals& I, int k, double t, const FocalReport& focal);

/// Coarea oracle: integral over [0, t] of parallel_area, composite
/// Gauss-Legendre with `panels` panels of 5 nodes.
double tube_volume_coarea(const SampledSurface& sampled, double t, Side side, int panels = 32);
double tube_volume_coarea(const Surface& s, double t, Side side, int panels = 32);

struct MinimalTubeBound {
    /// 2 pi chi (t - 5 sin t cos t) + 16 pi sin t cos t, the result of
    /// substituting A <= 4 pi (2 - chi) into the two-sided volume.
    double derived;
    /// Same expression with 32 pi in place of 16 pi, the constant usually
    /// quoted for this bound. It does not follow from the substitution and is
    /// reported for comparison only.
    double printed;
};

/// Upper bound on Vol(Omega^t) for a minimal surface in S^3 with Euler
/// characteristic chi (even, <= 2).
MinimalTubeBound tube_volume_upper_bound_minimal(int chi, double t);

} // namespace tubeform
