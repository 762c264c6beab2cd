#pragma once

#include "tubeform/surface.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace tubeform {

struct McConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    /// Coarse parameter grid per chart axis for the distance solver.
    int grid = 48;
    double refine_tol = 1e-9;
    /// Radius of the sampled geodesic ball about the origin (k = -1 only).
    /// Zero selects the smallest radius that contains every requested tube.
    double h3_ball_radius = 0.0;
    int basins = 5;
    int max_iterations = 200;
    /// Independently seeded substreams; fixed so that results do not depend
    /// on the number of worker threads.
    int partitions = 64;
    unsigned threads = 0; ///< 0: hardware concurrency
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples_inside = 0;
    std::uint64_t samples_used = 0;
    std::uint64_t discarded = 0;
    double region_volume = 0.0;
};

/// Deterministic engine for substream `stream` of `seed`.
std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream);

/// Uniform sampler on S^3, or on the geodesic ball of radius R about the
/// origin of H^3.
class AmbientSampler {
public:
    AmbientSampler(SpaceForm space, double ball_radius = 0.0);

    AmbientPoint draw(std::mt19937_64& rng) const;
    double region_volume() const;
    double ball_radius() const { return radius_; }

    /// Inverse of s -> (sinh 2s - 2s) / (sinh 2R - 2R) by bisection to 1e-12.
    double radius_quantile(double u) const;

private:
    SpaceForm space_;
    double radius_;
    double normaliser_;
};

/// sample_ambient for a single draw from substream `stream` (the stream's
/// first point).
AmbientPoint sample_ambient(const SpaceForm& space, const McConfig& cfg, std::uint64_t stream);

struct DistanceResult {
    double d;
    ChartLocation foot;
    Side side;
    int iterations;
};

/// Global distance from ambient points to a surface: a coarse scan of a
/// per-chart parameter grid, the best local minima of that scan kept as
/// basins, each refined by damped Newton descent on the squared chordal
/// distance in chart coordinates.
class DistanceSolver {
public:
    explicit DistanceSolver(const Surface& s, const McConfig& cfg = {});

    /// Throws SolverError when a refinement does not converge.
    DistanceResult solve(const AmbientPoint& p) const;
    /// As solve(), but returns nullopt as soon as the coarse scan proves
    /// d_M(p) >= cutoff.
    std::optional<DistanceResult> solve_within(const AmbientPoint& p, double cutoff) const;

    /// Every surface point lies within this distance of some grid node.
    double cover_radius() const { return cover_; }
    const Surface& surface() const { return surface_; }

private:
    static constexpr int kBlock = 4;
    /// kBlock x kBlock patch of grid nodes inside a geodesic ball of radius r.
    struct Block {
        Vec4 centre; ///< first coordinate pre-multiplied by k
        double c_r, s_r; ///< C_k(r), S_k(r)
        int i0, i1, j0, j1;
    };
    struct ChartGrid {
        int nu, nv;
        std::vector<double> x0, x1, x2, x3; // x0 pre-multiplied by k
        std::vector<Block> blocks;
        std::vector<double> u, v;
    };
    struct Refined {
        double objective;
        ChartLocation at;
        int iterations;
    };

    Refined refine(const AmbientPoint& p, ChartLocation start) const;
    Side side_at(const AmbientPoint& p, const ChartLocation& foot, double d) const;

    Surface surface_;
    McConfig cfg_;
    std::vector<ChartGrid> grids_;
    double cover_ = 0.0;
};

DistanceResult distance_to_surface(const Surface& s, const AmbientPoint& p, const McConfig& cfg = {});

struct TubeQuery {
    double t;
    Side side;
};

/// Monte Carlo estimates of Vol(Omega_side^t) for every query, all sharing
/// one sample set. The surface must already be orientation-normalised.
/// Throws OracleUnreliable when more than 0.1% of samples are discarded.
std::vector<McEstimate> mc_tube_volumes(const Surface& s, const std::vector<TubeQuery>& queries, const McConfig& cfg);

McEstimate mc_tube_volume(const Surface& s, double t, Side side, const McConfig& cfg);

/// Smallest H^3 sampling radius about the origin whose ball contains the
/// t-tube of s (with a small safety margin).
double required_ball_radius(const Surface& s, double t_max);

} // namespace tubeform
