#include "tubeform/montecarlo.hpp"

#include "tubeform/error.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/Dense>

namespace tubeform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// sinh(x) - x without cancellation for small x.
double sinh_minus_identity(double x)
{
    if (std::abs(x) < 0.5) {
        const double x2 = x * x;
        double term = x * x2 / 6.0;
        double sum = 0.0;
        for (int n = 5; n <= 19; n += 2) {
            sum += term;
            term *= x2 / ((n - 1.0) * n);
        }
        return sum;
    }
    return std::sinh(x) - x;
}

// Geodesic distance from the model inner product <p, q>.
double distance_from_inner(int k, double inner)
{
    if (k == 1)
        return std::acos(std::clamp(inner, -1.0, 1.0));
    return std::acosh(std::max(1.0, -inner));
}

// Inner product at geodesic distance d; -inf past the antipode on S^3.
double inner_from_distance(int k, double d)
{
    if (k == 1)
        return d >= std::numbers::pi ? -kInf : std::cos(d);
    return -std::cosh(d);
}

double wrap(double x, double lo, double hi)
{
    const double span = hi - lo;
    x = std::fmod(x - lo, span);
    if (x < 0.0)
        x += span;
    return lo + x;
}

// Keeps refinement off the chart edges of non-periodic axes, where polar
// atlases degenerate; the distance error this causes is second order.
constexpr double kEdgeMargin = 1e-7;

double confine(double x, double lo, double hi, bool periodic)
{
    if (periodic)
        return wrap(x, lo, hi);
    const double m = kEdgeMargin * (hi - lo);
    return std::clamp(x, lo + m, hi - m);
}

bool pinned(double x, double grad, double lo, double hi, bool periodic)
{
    if (periodic)
        return false;
    const double m = 1.5 * kEdgeMargin * (hi - lo);
    return (x <= lo + m && grad > 0.0) || (x >= hi - m && grad < 0.0);
}

} // namespace

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream)
{
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

AmbientSampler::AmbientSampler(SpaceForm space, double ball_radius)
    : space_(space), radius_(ball_radius), normaliser_(0.0)
{
    if (!space_.is_sphere()) {
        if (!(ball_radius > 0.0) || !std::isfinite(ball_radius))
            throw InvalidInput("hyperbolic sampling needs a positive finite ball radius");
        normaliser_ = sinh_minus_identity(2.0 * radius_);
    }
}

double AmbientSampler::region_volume() const
{
    return space_.is_sphere() ? SpaceForm::sphere_volume : std::numbers::pi * normaliser_;
}

double AmbientSampler::radius_quantile(double u) const
{
    double lo = 0.0, hi = radius_;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (sinh_minus_identity(2.0 * mid) / normaliser_ < u)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

AmbientPoint AmbientSampler::draw(std::mt19937_64& rng) const
{
    std::normal_distribution<double> normal;
    if (space_.is_sphere()) {
        Vec4 x;
        double n2 = 0.0;
        do {
            x = Vec4(normal(rng), normal(rng), normal(rng), normal(rng));
            n2 = x.squaredNorm();
        } while (n2 < 1e-300);
        return space_.project(x / std::sqrt(n2));
    }
    Eigen::Vector3d w;
    double n2 = 0.0;
    do {
        w = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
        n2 = w.squaredNorm();
    } while (n2 < 1e-300);
    w /= std::sqrt(n2);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double s = radius_quantile(uniform(rng));
    const double sh = std::sinh(s);
    return space_.project(Vec4(std::cosh(s), sh * w[0], sh * w[1], sh * w[2]));
}

AmbientPoint sample_ambient(const SpaceForm& space, const McConfig& cfg, std::uint64_t stream)
{
    AmbientSampler sampler(space, cfg.h3_ball_radius);
    std::mt19937_64 rng = stream_engine(cfg.seed, stream);
    return sampler.draw(rng);
}

DistanceSolver::DistanceSolver(const Surface& s, const McConfig& cfg) : surface_(s), cfg_(cfg)
{
    if (cfg_.grid < 4)
        throw InvalidInput("distance solver grid must have at least 4 nodes per axis");
    if (cfg_.basins < 1)
        throw InvalidInput("distance solver needs at least one basin");
    const SpaceForm& Q = s.space();
    const int n = cfg_.grid;
    for (const Chart& c : s.charts()) {
        ChartGrid g;
        g.nu = g.nv = n;
        auto node = [n](double lo, double hi, bool periodic, int i) {
            return lo + (periodic ? i : i + 0.5) * (hi - lo) / n;
        };
        std::vector<AmbientPoint> pts;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double u = node(c.u0, c.u1, c.periodic_u, i);
                const double v = node(c.v0, c.v1, c.periodic_v, j);
                const AmbientPoint x = Q.project(c.immersion(u, v));
                g.x0.push_back(Q.k() * x[0]);
                g.x1.push_back(x[1]);
                g.x2.push_back(x[2]);
                g.x3.push_back(x[3]);
                g.u.push_back(u);
                g.v.push_back(v);
                pts.push_back(x);
            }
        }
        // Largest cell diagonal, wrapping across periodic seams.
        const int iu = c.periodic_u ? n : n - 1;
        const int iv = c.periodic_v ? n : n - 1;
        auto at = [&](int i, int j) -> const AmbientPoint& {
            return pts[static_cast<std::size_t>((i % n) * n + (j % n))];
        };
        for (int i = 0; i < iu; ++i) {
            for (int j = 0; j < iv; ++j) {
                cover_ = std::max({cover_, Q.dist(at(i, j), at(i + 1, j + 1)), Q.dist(at(i + 1, j), at(i, j + 1))});
            }
        }
        // Blocks of kBlock x kBlock nodes, each inside a geodesic ball.
        for (int i0 = 0; i0 < n; i0 += kBlock) {
            for (int j0 = 0; j0 < n; j0 += kBlock) {
                Block b{Vec4::Zero(), 0.0, 0.0, i0, std::min(i0 + kBlock, n), j0, std::min(j0 + kBlock, n)};
                Vec4 mean = Vec4::Zero();
                for (int i = b.i0; i < b.i1; ++i)
                    for (int j = b.j0; j < b.j1; ++j)
                        mean += at(i, j).coords();
                const AmbientPoint centre = Q.project(mean);
                double radius = 0.0;
                for (int i = b.i0; i < b.i1; ++i)
                    for (int j = b.j0; j < b.j1; ++j)
                        radius = std::max(radius, Q.dist(centre, at(i, j)));
                radius = radius * (1.0 + 1e-9) + 1e-12;
                b.centre = centre.coords();
                b.centre[0] *= Q.k();
                b.c_r = ck(radius, Q.k());
                b.s_r = sk(radius, Q.k());
                g.blocks.push_back(b);
            }
        }
        grids_.push_back(std::move(g));
    }
    cover_ *= 1.1;
}

DistanceSolver::Refined DistanceSolver::refine(const AmbientPoint& p, ChartLocation start) const
{
    const SpaceForm& Q = surface_.space();
    const Chart& c = surface_.chart(start.chart);
    const Vec4& x = p.coords();
    // Minimise -<p, f(u,v)>, which orders chordal (hence geodesic)
    // distances on both models.
    ChartLocation at = start;
    ChartJet jet = c.jet(at.u, at.v);
    double phi = -Q.inner(x, jet.f);
    double mu = 0.0;
    for (int iter = 1; iter <= cfg_.max_iterations; ++iter) {
        Eigen::Vector2d grad(-Q.inner(x, jet.fu), -Q.inner(x, jet.fv));
        Eigen::Matrix2d hess;
        hess << -Q.inner(x, jet.fuu), -Q.inner(x, jet.fuv), -Q.inner(x, jet.fuv), -Q.inner(x, jet.fvv);
        const double scale = hess.cwiseAbs().maxCoeff() + 1e-300;
        // Projected Newton: a coordinate pinned at a chart edge with the
        // gradient pushing outward is frozen, the other one solved alone.
        if (pinned(at.u, grad[0], c.u0, c.u1, c.periodic_u)) {
            grad[0] = 0.0;
            hess.row(0) << scale, 0.0;
            hess(1, 0) = 0.0;
        }
        if (pinned(at.v, grad[1], c.v0, c.v1, c.periodic_v)) {
            grad[1] = 0.0;
            hess.row(1) << 0.0, scale;
            hess(0, 1) = 0.0;
        }

        Eigen::Matrix2d damped = hess + mu * Eigen::Matrix2d::Identity();
        if (damped.determinant() <= 0.0 || damped.trace() <= 0.0) {
            mu = std::max(mu * 10.0, 1e-6 * scale);
            continue;
        }
        const Eigen::Vector2d step = -damped.inverse() * grad;
        ChartLocation next{at.chart, confine(at.u + step[0], c.u0, c.u1, c.periodic_u),
                           confine(at.v + step[1], c.v0, c.v1, c.periodic_v)};
        const double phi_next = -Q.inner(x, c.immersion(next.u, next.v));
        // Actual displacement, measured modulo the period on periodic axes.
        double du = next.u - at.u, dv = next.v - at.v;
        if (c.periodic_u)
            du = std::remainder(du, c.span_u());
        if (c.periodic_v)
            dv = std::remainder(dv, c.span_v());
        const double moved = std::hypot(du, dv);

        if (phi_next <= phi + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(phi)) {
            at = next;
            phi = phi_next;
            jet = c.jet(at.u, at.v);
            mu *= 0.1;
            if (mu < 1e-12 * scale)
                mu = 0.0;
            if (moved <= cfg_.refine_tol)
                return {phi, at, iter};
        } else {
            if (moved <= cfg_.refine_tol)
                return {phi, at, iter};
            mu = std::max(mu * 10.0, 1e-6 * scale);
        }
    }
    throw SolverError("distance refinement did not converge");
}

Side DistanceSolver::side_at(const AmbientPoint& p, const ChartLocation& foot, double d) const
{
    if (d < 1e-12)
        return Side::plus;
    const Chart& c = surface_.chart(foot.chart);
    ChartLocation at = foot;
    Frame fr = [&] {
        try {
            return frame(surface_, at);
        } catch (const RegularityError&) {
            // Degenerate coordinate edge (polar cap); the normal is continuous,
            // so read it just inside the chart.
            if (!c.periodic_u)
                at.u = std::clamp(at.u, c.u0 + 1e-4 * c.span_u(), c.u1 - 1e-4 * c.span_u());
            if (!c.periodic_v)
                at.v = std::clamp(at.v, c.v0 + 1e-4 * c.span_v(), c.v1 - 1e-4 * c.span_v());
            return frame(surface_, at);
        }
    }();
    const SpaceForm& Q = surface_.space();
    try {
        const TangentVec dir = Q.initial_direction(fr.position, p);
        return Q.inner(dir.v, fr.normal.v) >= 0.0 ? Side::plus : Side::minus;
    } catch (const UndefinedDirection&) {
        return Q.inner(p.coords(), fr.normal.v) >= 0.0 ? Side::plus : Side::minus;
    }
}

std::optional<DistanceResult> DistanceSolver::solve_within(const AmbientPoint& p, double cutoff) const
{
    const int k = surface_.space().k();
    struct Basin {
        double inner;
        int chart;
        int index;
    };
    std::array<Basin, 16> basins{};
    const int max_basins = std::min(cfg_.basins, static_cast<int>(basins.size()));
    int count = 0;
    double best_inner = -kInf;

    // Upper bound on the score of any node in a block, from the distance of
    // p to the block's bounding ball.
    auto block_bound = [&](const Block& b) {
        const double ic = b.centre.dot(p.coords());
        if (ic >= k * b.c_r)
            return static_cast<double>(k);
        return ic * b.c_r + std::sqrt(std::max(0.0, k * (1.0 - ic * ic))) * b.s_r;
    };
    thread_local std::vector<double> scores;
    thread_local std::vector<double> bounds;
    thread_local std::vector<char> evaluated;
    std::size_t total = 0, nblocks = 0;
    for (const ChartGrid& g : grids_) {
        total += g.x0.size();
        nblocks += g.blocks.size();
    }
    scores.assign(total, -kInf);
    bounds.resize(nblocks);
    evaluated.assign(nblocks, 0);

    double top_bound = -kInf;
    std::size_t top_block = 0;
    {
        std::size_t bi = 0;
        for (const ChartGrid& g : grids_)
            for (const Block& b : g.blocks) {
                bounds[bi] = block_bound(b);
                if (bounds[bi] > top_bound) {
                    top_bound = bounds[bi];
                    top_block = bi;
                }
                ++bi;
            }
    }
    // Every surface point lies within cover of a node, and no node beats
    // top_bound, so p is provably outside the cutoff.
    if (distance_from_inner(k, top_bound) - cover_ >= cutoff)
        return std::nullopt;

    const double p0 = p[0], p1 = p[1], p2 = p[2], p3 = p[3];
    auto evaluate = [&](std::size_t bi) {
        std::size_t offset = 0;
        for (const ChartGrid& g : grids_) {
            if (bi < g.blocks.size()) {
                const Block& b = g.blocks[bi];
                for (int i = b.i0; i < b.i1; ++i)
                    for (int j = b.j0; j < b.j1; ++j) {
                        const auto idx = static_cast<std::size_t>(i * g.nv + j);
                        const double sc = g.x0[idx] * p0 + g.x1[idx] * p1 + g.x2[idx] * p2 + g.x3[idx] * p3;
                        scores[offset + idx] = sc;
                        best_inner = std::max(best_inner, sc);
                    }
                return;
            }
            bi -= g.blocks.size();
            offset += g.x0.size();
        }
    };
    // A node further than the best one plus the cover radius can never win,
    // since the refinement from the best node does at least as well.
    auto floor_of = [&](double inner) { return inner_from_distance(k, distance_from_inner(k, inner) + cover_); };

    evaluate(top_block);
    evaluated[top_block] = 1;
    double floor = floor_of(best_inner);
    for (std::size_t bi = 0; bi < nblocks; ++bi) {
        if (evaluated[bi] || bounds[bi] <= floor)
            continue;
        evaluate(bi);
        evaluated[bi] = 1;
        floor = floor_of(best_inner);
    }

    if (distance_from_inner(k, best_inner) - cover_ >= cutoff)
        return std::nullopt;

    // Pass two: local maxima among the surviving nodes.
    const double* chart_scores = scores.data();
    std::size_t block_base = 0;
    for (int ci = 0; ci < static_cast<int>(grids_.size()); ++ci) {
        const ChartGrid& g = grids_[static_cast<std::size_t>(ci)];
        const Chart& c = surface_.chart(ci);
        for (std::size_t bk = 0; bk < g.blocks.size(); ++bk) {
            if (!evaluated[block_base + bk])
                continue;
            const Block& blk = g.blocks[bk];
            for (int i = blk.i0; i < blk.i1; ++i) {
                for (int j = blk.j0; j < blk.j1; ++j) {
                    const int idx = i * g.nv + j;
                    const double b = chart_scores[idx];
                    if (b <= floor)
                        continue;
                    if (count == max_basins && b <= basins[static_cast<std::size_t>(count - 1)].inner)
                        continue;
                    bool local_max = true;
                    for (int di = -1; di <= 1 && local_max; ++di) {
                        for (int dj = -1; dj <= 1; ++dj) {
                            if (di == 0 && dj == 0)
                                continue;
                            int ni = i + di, nj = j + dj;
                            if (ni < 0 || ni >= g.nu) {
                                if (!c.periodic_u)
                                    continue;
                                ni = (ni + g.nu) % g.nu;
                            }
                            if (nj < 0 || nj >= g.nv) {
                                if (!c.periodic_v)
                                    continue;
                                nj = (nj + g.nv) % g.nv;
                            }
                            if (chart_scores[ni * g.nv + nj] > b) {
                                local_max = false;
                                break;
                            }
                        }
                    }
                    if (!local_max)
                        continue;
                    // Insert keeping basins sorted by descending inner product.
                    int pos = std::min(count, max_basins - 1);
                    while (pos > 0 && basins[static_cast<std::size_t>(pos - 1)].inner < b) {
                        basins[static_cast<std::size_t>(pos)] = basins[static_cast<std::size_t>(pos - 1)];
                        --pos;
                    }
                    basins[static_cast<std::size_t>(pos)] = {b, ci, idx};
                    count = std::min(count + 1, max_basins);
                }
            }
        }
        chart_scores += g.x0.size();
        block_base += g.blocks.size();
    }

    const SpaceForm& Q = surface_.space();
    double best_d = kInf;
    Refined best{};
    for (int b = 0; b < count; ++b) {
        const Basin& basin = basins[static_cast<std::size_t>(b)];
        if (distance_from_inner(k, basin.inner) - cover_ >= best_d)
            continue;
        const ChartGrid& g = grids_[static_cast<std::size_t>(basin.chart)];
        const auto idx = static_cast<std::size_t>(basin.index);
        const Refined r = refine(p, {basin.chart, g.u[idx], g.v[idx]});
        const Chart& c = surface_.chart(basin.chart);
        const double d = Q.dist(p, Q.project(c.immersion(r.at.u, r.at.v)));
        if (d < best_d) {
            best_d = d;
            best = r;
        }
    }
    return DistanceResult{best_d, best.at, side_at(p, best.at, best_d), best.iterations};
}

DistanceResult DistanceSolver::solve(const AmbientPoint& p) const
{
    return *solve_within(p, kInf);
}

DistanceResult distance_to_surface(const Surface& s, const AmbientPoint& p, const McConfig& cfg)
{
    return DistanceSolver(s, cfg).solve(p);
}

double required_ball_radius(const Surface& s, double t_max)
{
    const SpaceForm& Q = s.space();
    double reach = 0.0;
    for (const ChartLocation& at : s.validation_grid(32))
        reach = std::max(reach, Q.dist(Q.origin(), Q.project(s.chart(at.chart).immersion(at.u, at.v))));
    return reach + t_max + 0.05 * (1.0 + reach);
}

std::vector<McEstimate> mc_tube_volumes(const Surface& s, const std::vector<TubeQuery>& queries, const McConfig& cfg)
{
    if (cfg.samples == 0)
        throw InvalidInput("Monte Carlo needs at least one sample");
    if (cfg.partitions < 1)
        throw InvalidInput("Monte Carlo needs at least one partition");
    double t_max = 0.0;
    for (const TubeQuery& q : queries) {
        if (!(q.t >= 0.0) || !std::isfinite(q.t))
            throw InvalidInput("tube radius must be finite and non-negative");
        t_max = std::max(t_max, q.t);
    }

    const SpaceForm& Q = s.space();
    double radius = 0.0;
    if (!Q.is_sphere()) {
        const double needed = required_ball_radius(s, t_max);
        radius = cfg.h3_ball_radius > 0.0 ? cfg.h3_ball_radius : needed;
        if (radius < needed)
            throw InvalidInput("h3_ball_radius does not contain the requested tube");
    }
    const AmbientSampler sampler(Q, radius);
    const DistanceSolver solver(s, cfg);

    const auto partitions = static_cast<std::uint64_t>(cfg.partitions);
    const std::size_t nq = queries.size();
    std::vector<std::uint64_t> inside(partitions * nq, 0);
    std::vector<std::uint64_t> discarded(partitions, 0);

    auto run_partition = [&](std::uint64_t part) {
        std::mt19937_64 rng = stream_engine(cfg.seed, part);
        const std::uint64_t n = cfg.samples / partitions + (part < cfg.samples % partitions ? 1 : 0);
        std::uint64_t* hits = inside.data() + part * nq;
        for (std::uint64_t i = 0; i < n; ++i) {
            const AmbientPoint p = sampler.draw(rng);
            try {
                const std::optional<DistanceResult> r = solver.solve_within(p, t_max);
                if (!r)
                    continue;
                for (std::size_t q = 0; q < nq; ++q) {
                    if (r->d < queries[q].t && (queries[q].side == Side::both || queries[q].side == r->side))
                        ++hits[q];
                }
            } catch (const SolverError&) {
                ++discarded[part];
            }
        }
    };

    unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, partitions));
    if (workers <= 1) {
        for (std::uint64_t part = 0; part < partitions; ++part)
            run_partition(part);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t part = next++; part < partitions; part = next++)
                    run_partition(part);
            });
        }
    }

    std::uint64_t dropped = 0;
    for (std::uint64_t part = 0; part < partitions; ++part)
        dropped += discarded[part];
    if (static_cast<double>(dropped) > 1e-3 * static_cast<double>(cfg.samples))
        throw OracleUnreliable("distance solver discarded " + std::to_string(dropped) + " of " +
                               std::to_string(cfg.samples) + " samples");

    const std::uint64_t used = cfg.samples - dropped;
    const double volume = sampler.region_volume();
    std::vector<McEstimate> out(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        std::uint64_t hits = 0;
        for (std::uint64_t part = 0; part < partitions; ++part)
            hits += inside[part * nq + q];
        const double p_hat = static_cast<double>(hits) / static_cast<double>(used);
        out[q] = McEstimate{volume * p_hat, volume * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(used)),
                            hits, used, dropped, volume};
    }
    return out;
}

McEstimate mc_tube_volume(const Surface& s, double t, Side side, const McConfig& cfg)
{
    return mc_tube_volumes(s, {TubeQuery{t, side}}, cfg).front();
}

} // namespace tubeform
