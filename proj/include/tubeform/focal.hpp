#pragma once

#include "tubeform/integrate.hpp"
#include "tubeform/montecarlo.hpp"
#include "tubeform/surface.hpp"

#include <optional>

namespace tubeform {

/// First positive zero of C_k(t) - lambda S_k(t), the distance along the
/// normal on `side` to the focal point of a principal direction with
/// curvature lambda (side minus uses -lambda). +infinity when there is none.
double focal_distance(double lambda, int k, Side side);

struct FocalReport {
    /// Smallest focal distance along the normal on each side; +infinity
    /// stands for "unbounded".
    double rho_plus;
    double rho_minus;
    double rho;
    ChartLocation argmin_plus;
    ChartLocation argmin_minus;
    /// Distance from the sampled focal points lying in each component back to
    /// M, measured by the global distance solver.
    double focal_set_distance_plus;
    double focal_set_distance_minus;
};

struct FocalOptions {
    /// Every stride-th quadrature node (per axis) seeds a focal point for the
    /// focal-set distance.
    int focal_stride = 2;
    /// Number of best grid cells refined by local minimisation, per side.
    int refine_cells = 3;
    McConfig solver;
};

/// Focal radii of an orientation-normalised surface: the minimum over the
/// quadrature grid of the per-point focal distance on each side, refined by
/// local minimisation around the best nodes to 1e-9.
FocalReport focal_radius(const Surface& s, const FocalOptions& opts = {});
FocalReport focal_radius(const Surface& s, const SampledSurface& sampled, const FocalOptions& opts = {});

struct ReachResult {
    bool pass = true;
    /// Largest |d_M(z) - t| over all probes.
    double max_deviation = 0.0;
    /// Worst violating probe, present only when pass is false.
    std::optional<AmbientPoint> witness;
    ChartLocation witness_base{};
    Side witness_side = Side::plus;
    double witness_distance = 0.0;
};

/// Pushes n quasi-uniform surface points a distance t along both normals and
/// checks that each lands exactly t away from M (within 1e-6).
ReachResult reach_check(const Surface& s, double t, int n, const McConfig& solver = {});

} // namespace tubeform
