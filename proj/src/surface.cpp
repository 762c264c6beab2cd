#include "tubeform/surface.hpp"

#include "tubeform/error.hpp"
#include "tubeform/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace tubeform {

namespace {

// Central-difference step as a fraction of the chart span.
constexpr double kStepFraction = 1e-5;
constexpr double kMinMetricDet = 1e-12;
constexpr double kOnModelTolerance = 1e-10;

FirstDerivs first_derivs_of(const Chart& c, double u, double v)
{
    if (c.first_derivs)
        return c.first_derivs(u, v);
    const double hu = kStepFraction * c.span_u();
    const double hv = kStepFraction * c.span_v();
    return FirstDerivs{(c.immersion(u + hu, v) - c.immersion(u - hu, v)) / (2.0 * hu),
                       (c.immersion(u, v + hv) - c.immersion(u, v - hv)) / (2.0 * hv)};
}

SecondDerivs second_derivs_of(const Chart& c, double u, double v)
{
    if (c.second_derivs)
        return c.second_derivs(u, v);
    // Nested differencing of the first-derivative supplier.
    const double hu = kStepFraction * c.span_u();
    const double hv = kStepFraction * c.span_v();
    const FirstDerivs up = first_derivs_of(c, u + hu, v);
    const FirstDerivs um = first_derivs_of(c, u - hu, v);
    const FirstDerivs vp = first_derivs_of(c, u, v + hv);
    const FirstDerivs vm = first_derivs_of(c, u, v - hv);
    SecondDerivs d;
    d.fuu = (up.fu - um.fu) / (2.0 * hu);
    d.fvv = (vp.fv - vm.fv) / (2.0 * hv);
    d.fuv = 0.5 * ((up.fv - um.fv) / (2.0 * hu) + (vp.fu - vm.fu) / (2.0 * hv));
    return d;
}

struct Metric {
    double E, F, G, det;
};

Metric metric(const SpaceForm& Q, const Vec4& fu, const Vec4& fv)
{
    const double E = Q.inner(fu, fu);
    const double F = Q.inner(fu, fv);
    const double G = Q.inner(fv, fv);
    return {E, F, G, E * G - F * F};
}

} // namespace

const char* to_string(Side side)
{
    switch (side) {
    case Side::plus:
        return "plus";
    case Side::minus:
        return "minus";
    case Side::both:
        return "both";
    }
    return "?";
}

ChartJet Chart::jet(double u, double v) const
{
    const FirstDerivs d1 = first_derivs_of(*this, u, v);
    const SecondDerivs d2 = second_derivs_of(*this, u, v);
    return ChartJet{immersion(u, v), d1.fu, d1.fv, d2.fuu, d2.fuv, d2.fvv};
}

Surface::Surface(SpaceForm space, std::vector<Chart> charts, int resolution, std::string name)
    : space_(space), charts_(std::move(charts)), resolution_(resolution), name_(std::move(name))
{
    if (charts_.empty())
        throw InvalidInput("surface needs at least one chart");
    if (resolution_ < 2)
        throw InvalidInput("quadrature resolution must be at least 2");
    for (const Chart& c : charts_) {
        if (!c.immersion)
            throw InvalidInput("chart has no immersion");
        if (!(c.u1 > c.u0) || !(c.v1 > c.v0))
            throw InvalidInput("chart domain must be a non-empty rectangle");
        if (c.orientation != 1 && c.orientation != -1)
            throw InvalidInput("chart orientation must be +1 or -1");
    }
    for (const ChartLocation& at : validation_grid()) {
        const Chart& c = chart(at.chart);
        const Vec4 x = c.immersion(at.u, at.v);
        const double drift = std::abs(space_.inner(x, x) - space_.k());
        if (!(drift <= kOnModelTolerance) || (space_.k() == -1 && x[0] <= 0.0))
            throw RegularityError("immersion leaves the model at chart " + std::to_string(at.chart));
        const FirstDerivs d = first_derivs_of(c, at.u, at.v);
        if (!(metric(space_, d.fu, d.fv).det > kMinMetricDet))
            throw RegularityError("degenerate first fundamental form at chart " + std::to_string(at.chart));
    }
}

Surface Surface::with_orientation(int sign) const
{
    if (sign != 1 && sign != -1)
        throw InvalidInput("orientation sign must be +1 or -1");
    Surface out = *this;
    out.orientation_sign_ = sign;
    return out;
}

Surface Surface::with_resolution(int resolution) const
{
    if (resolution < 2)
        throw InvalidInput("quadrature resolution must be at least 2");
    Surface out = *this;
    out.resolution_ = resolution;
    return out;
}

Surface Surface::without_derivatives() const
{
    Surface out = *this;
    for (Chart& c : out.charts_) {
        c.first_derivs = nullptr;
        c.second_derivs = nullptr;
    }
    return out;
}

std::vector<ChartLocation> Surface::validation_grid(int n) const
{
    std::vector<ChartLocation> grid;
    grid.reserve(charts_.size() * static_cast<std::size_t>(n * n));
    for (int ci = 0; ci < static_cast<int>(charts_.size()); ++ci) {
        const Chart& c = charts_[static_cast<std::size_t>(ci)];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                grid.push_back({ci, c.u0 + (i + 0.5) * c.span_u() / n, c.v0 + (j + 0.5) * c.span_v() / n});
    }
    return grid;
}

Frame frame(const Surface& s, const ChartLocation& at, const ChartJet& jet)
{
    const SpaceForm& Q = s.space();
    const Chart& c = s.chart(at.chart);
    const Metric g = metric(Q, jet.fu, jet.fv);
    if (!(g.det > kMinMetricDet))
        throw RegularityError("degenerate first fundamental form");
    const AmbientPoint p = Q.project(jet.f);
    const Vec4 eta = (s.orientation_sign() * c.orientation) * Q.orthogonal_complement(p.coords(), jet.fu, jet.fv);
    return Frame{p, jet.fu, jet.fv, TangentVec{p, eta}, std::sqrt(g.det)};
}

Frame frame(const Surface& s, const ChartLocation& at)
{
    const Chart& c = s.chart(at.chart);
    const FirstDerivs d = first_derivs_of(c, at.u, at.v);
    ChartJet jet{c.immersion(at.u, at.v), d.fu, d.fv, Vec4::Zero(), Vec4::Zero(), Vec4::Zero()};
    return frame(s, at, jet);
}

PointData point_data(const Surface& s, const ChartLocation& at)
{
    const SpaceForm& Q = s.space();
    const ChartJet jet = s.chart(at.chart).jet(at.u, at.v);
    const Frame fr = frame(s, at, jet);
    const Vec4& eta = fr.normal.v;

    const Metric g = metric(Q, jet.fu, jet.fv);
    const double h11 = Q.inner(jet.fuu, eta);
    const double h12 = Q.inner(jet.fuv, eta);
    const double h22 = Q.inner(jet.fvv, eta);

    // g = R^T R with R upper triangular; the eigenvalues of g^-1 h are those
    // of the symmetric R^-T h R^-1, whose spread is a sum of squares.
    const double r11 = std::sqrt(g.E);
    Eigen::Matrix2d r_inv;
    r_inv << 1.0 / r11, -g.F / std::sqrt(g.det) / r11, 0.0, r11 / std::sqrt(g.det);
    Eigen::Matrix2d h;
    h << h11, h12, h12, h22;
    const Eigen::Matrix2d m = r_inv.transpose() * h * r_inv;
    const double m11 = m(0, 0), m12 = 0.5 * (m(0, 1) + m(1, 0)), m22 = m(1, 1);
    const double mean = 0.5 * (m11 + m22);
    const double spread = std::hypot(0.5 * (m11 - m22), m12);

    const double lambda1 = mean - spread;
    const double lambda2 = mean + spread;
    return PointData{fr.position,
                     fr.normal,
                     lambda1,
                     lambda2,
                     0.5 * (lambda1 + lambda2),
                     Q.k() + lambda1 * lambda2,
                     fr.area_element};
}

Surface normalize_orientation(const Surface& s)
{
    const SampledSurface sampled = sample_surface(s);
    const double A = sampled.area();
    const double total_mean = sampled.total_mean_curvature();
    if (std::abs(total_mean) <= 1e-9 * A)
        return s;
    return total_mean < 0.0 ? s.flipped() : s;
}

} // namespace tubeform
