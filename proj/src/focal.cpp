#include "tubeform/focal.hpp"

#include "tubeform/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace tubeform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double halton(std::uint64_t index, std::uint64_t base)
{
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

double side_focal(const PointData& p, int k, Side side)
{
    return std::min(focal_distance(p.lambda1, k, side), focal_distance(p.lambda2, k, side));
}

ChartLocation confine(const Chart& c, ChartLocation at)
{
    auto fix = [](double x, double lo, double hi, bool periodic) {
        if (periodic) {
            x = std::fmod(x - lo, hi - lo);
            return lo + (x < 0.0 ? x + (hi - lo) : x);
        }
        return std::clamp(x, lo, hi);
    };
    at.u = fix(at.u, c.u0, c.u1, c.periodic_u);
    at.v = fix(at.v, c.v0, c.v1, c.periodic_v);
    return at;
}

struct Minimum {
    ChartLocation at;
    double value;
};

// Nelder-Mead on one chart, started from a simplex of one grid cell.
template <typename F>
Minimum nelder_mead(const Chart& c, ChartLocation start, double cell_u, double cell_v, F&& f)
{
    std::array<ChartLocation, 3> x{start, start, start};
    x[1].u += cell_u;
    x[2].v += cell_v;
    std::array<double, 3> fx{};
    for (int i = 0; i < 3; ++i) {
        x[static_cast<std::size_t>(i)] = confine(c, x[static_cast<std::size_t>(i)]);
        fx[static_cast<std::size_t>(i)] = f(x[static_cast<std::size_t>(i)]);
    }
    auto combine = [&](const ChartLocation& a, const ChartLocation& b, double w) {
        return confine(c, ChartLocation{a.chart, a.u + w * (b.u - a.u), a.v + w * (b.v - a.v)});
    };
    for (int iter = 0; iter < 2000; ++iter) {
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[static_cast<std::size_t>(a)] < fx[static_cast<std::size_t>(b)]; });
        const auto best = static_cast<std::size_t>(order[0]);
        const auto mid = static_cast<std::size_t>(order[1]);
        const auto worst = static_cast<std::size_t>(order[2]);
        const double size = std::max(std::hypot(x[mid].u - x[best].u, x[mid].v - x[best].v),
                                     std::hypot(x[worst].u - x[best].u, x[worst].v - x[best].v));
        if (fx[worst] - fx[best] <= 1e-12 && size <= 1e-9 * std::max(c.span_u(), c.span_v()))
            break;
        if (size <= 1e-13 * std::max(c.span_u(), c.span_v()))
            break;
        const ChartLocation centroid{start.chart, 0.5 * (x[best].u + x[mid].u), 0.5 * (x[best].v + x[mid].v)};
        const ChartLocation reflected = combine(centroid, x[worst], -1.0);
        const double fr = f(reflected);
        if (fr < fx[best]) {
            const ChartLocation expanded = combine(centroid, x[worst], -2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                x[worst] = expanded;
                fx[worst] = fe;
            } else {
                x[worst] = reflected;
                fx[worst] = fr;
            }
        } else if (fr < fx[mid]) {
            x[worst] = reflected;
            fx[worst] = fr;
        } else {
            const ChartLocation contracted = combine(centroid, x[worst], 0.5);
            const double fc = f(contracted);
            if (fc < fx[worst]) {
                x[worst] = contracted;
                fx[worst] = fc;
            } else {
                for (std::size_t i : {mid, worst}) {
                    x[i] = combine(x[best], x[i], 0.5);
                    fx[i] = f(x[i]);
                }
            }
        }
    }
    const auto it = std::min_element(fx.begin(), fx.end());
    const auto i = static_cast<std::size_t>(it - fx.begin());
    return {x[i], fx[i]};
}

} // namespace

double focal_distance(double lambda, int k, Side side)
{
    if (side == Side::both)
        throw InvalidInput("focal distance needs a definite side");
    const double l = side == Side::minus ? -lambda : lambda;
    if (k == 1)
        return 0.5 * std::numbers::pi - std::atan(l); // arccot onto (0, pi)
    if (l > 1.0)
        return std::atanh(1.0 / l); // arccoth
    return kInf;
}

FocalReport focal_radius(const Surface& s, const FocalOptions& opts)
{
    return focal_radius(s, sample_surface(s), opts);
}

FocalReport focal_radius(const Surface& s, const SampledSurface& sampled, const FocalOptions& opts)
{
    const int k = s.space().k();
    const auto& nodes = sampled.samples();

    auto minimise_side = [&](Side side) -> Minimum {
        std::vector<std::size_t> order(nodes.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        auto value = [&](std::size_t i) { return side_focal(nodes[i].data, k, side); };
        const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(std::max(opts.refine_cells, 1)), order.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                          [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
        Minimum best{nodes[order[0]].at, value(order[0])};
        if (!std::isfinite(best.value))
            return best;
        for (std::size_t r = 0; r < keep; ++r) {
            const SurfaceSample& seed = nodes[order[r]];
            const Chart& c = s.chart(seed.at.chart);
            const double cell_u = c.span_u() / s.resolution();
            const double cell_v = c.span_v() / s.resolution();
            const Minimum m = nelder_mead(c, seed.at, cell_u, cell_v, [&](const ChartLocation& at) {
                try {
                    return side_focal(point_data(s, at), k, side);
                } catch (const RegularityError&) {
                    return kInf;
                }
            });
            if (m.value < best.value)
                best = m;
        }
        return best;
    };

    const Minimum plus = minimise_side(Side::plus);
    const Minimum minus = minimise_side(Side::minus);

    FocalReport report{};
    report.rho_plus = plus.value;
    report.rho_minus = minus.value;
    report.rho = std::min(plus.value, minus.value);
    report.argmin_plus = plus.at;
    report.argmin_minus = minus.at;
    report.focal_set_distance_plus = kInf;
    report.focal_set_distance_minus = kInf;

    // First focal point along each normal ray, assigned to the component it
    // lies in. Later ones sit past a conjugate point and say nothing about
    // the tube.
    const SpaceForm& Q = s.space();
    const DistanceSolver solver(s, opts.solver);
    auto place = [&](const PointData& p, Side side) {
        const double t = side_focal(p, k, side);
        if (!std::isfinite(t))
            return;
        const TangentVec dir{p.position, side_sign(side) * p.normal.v};
        const AmbientPoint z = Q.geodesic(p.position, dir, t);
        try {
            const DistanceResult r = solver.solve(z);
            double& slot = r.side == Side::plus ? report.focal_set_distance_plus : report.focal_set_distance_minus;
            slot = std::min(slot, r.d);
        } catch (const SolverError&) {
        }
    };
    const int n = s.resolution();
    const int stride = std::max(1, opts.focal_stride);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const int local = static_cast<int>(i % static_cast<std::size_t>(n * n));
        if ((local / n) % stride != 0 || (local % n) % stride != 0)
            continue;
        place(nodes[i].data, Side::plus);
        place(nodes[i].data, Side::minus);
    }
    for (const auto& [side, at] : {std::pair{Side::plus, plus.at}, std::pair{Side::minus, minus.at}}) {
        const PointData p = point_data(s, at);
        place(p, side);
    }
    return report;
}

ReachResult reach_check(const Surface& s, double t, int n, const McConfig& solver_cfg)
{
    if (!(t > 0.0))
        throw InvalidInput("reach check radius must be positive");
    if (n < 1)
        throw InvalidInput("reach check needs at least one sample");
    const SpaceForm& Q = s.space();
    const DistanceSolver solver(s, solver_cfg);
    const auto charts = static_cast<std::uint64_t>(s.charts().size());
    ReachResult out;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(n); ++i) {
        const auto ci = static_cast<int>(i % charts);
        const Chart& c = s.chart(ci);
        const std::uint64_t h = i / charts + 1;
        const ChartLocation at{ci, c.u0 + halton(h, 2) * c.span_u(), c.v0 + halton(h, 3) * c.span_v()};
        Frame fr = [&] {
            try {
                return frame(s, at);
            } catch (const RegularityError&) {
                return frame(s, ChartLocation{ci, c.u0 + 0.5 * c.span_u(), c.v0 + 0.5 * c.span_v()});
            }
        }();
        for (Side side : {Side::plus, Side::minus}) {
            const TangentVec dir{fr.position, side_sign(side) * fr.normal.v};
            const AmbientPoint z = Q.geodesic(fr.position, dir, t);
            const double d = solver.solve(z).d;
            const double deviation = std::abs(d - t);
            if (deviation > out.max_deviation) {
                out.max_deviation = deviation;
                if (deviation > 1e-6) {
                    out.pass = false;
                    out.witness = z;
                    out.witness_base = at;
                    out.witness_side = side;
                    out.witness_distance = d;
                }
            }
        }
    }
    return out;
}

} // namespace tubeform
