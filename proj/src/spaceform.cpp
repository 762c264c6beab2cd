#include "tubeform/spaceform.hpp"

#include "tubeform/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

namespace tubeform {

namespace {

constexpr double kModelTolerance = 1e-12;
constexpr double kMaxDrift = 1e-4;
constexpr double kUnitTolerance = 1e-9;

} // namespace

double sk(double t, int k)
{
    return k == 1 ? std::sin(t) : std::sinh(t);
}

double ck(double t, int k)
{
    return k == 1 ? std::cos(t) : std::cosh(t);
}

SpaceForm SpaceForm::make(int k)
{
    if (k != 1 && k != -1)
        throw InvalidInput("curvature sign must be +1 or -1, got " + std::to_string(k));
    return SpaceForm(k);
}

AmbientPoint SpaceForm::point(const Vec4& x) const
{
    if (!x.allFinite())
        throw InvalidInput("non-finite ambient coordinates");
    const double q = inner(x, x);
    const double drift = std::abs(q - k_);
    if (drift > kMaxDrift)
        throw InvalidInput("point is off the model (|<x,x> - k| = " + std::to_string(drift) + ")");
    if (k_ == -1 && x[0] <= 0.0)
        throw InvalidInput("point is on the lower sheet of the hyperboloid");
    if (drift > kModelTolerance)
        return AmbientPoint(x / std::sqrt(std::abs(q)));
    return AmbientPoint(x);
}

AmbientPoint SpaceForm::project(const Vec4& x) const
{
    const double q = inner(x, x);
    if (std::abs(q - k_) > kModelTolerance)
        return AmbientPoint(x / std::sqrt(std::abs(q)));
    return AmbientPoint(x);
}

TangentVec SpaceForm::tangent(const AmbientPoint& p, const Vec4& v) const
{
    const double scale = std::max(1.0, v.norm() * p.coords().norm());
    if (std::abs(inner(p.coords(), v)) > kModelTolerance * scale)
        throw InvalidInput("vector is not tangent to the model at its base point");
    return TangentVec{p, v};
}

AmbientPoint SpaceForm::geodesic(const AmbientPoint& p, const TangentVec& u, double t) const
{
    if (std::abs(inner(u.v, u.v) - 1.0) > kUnitTolerance)
        throw InvalidInput("geodesic direction must have unit length");
    return project(ck(t, k_) * p.coords() + sk(t, k_) * u.v);
}

Vec4 SpaceForm::geodesic_velocity(const AmbientPoint& p, const TangentVec& u, double t) const
{
    return ck(t, k_) * u.v - k_ * sk(t, k_) * p.coords();
}

double SpaceForm::dist(const AmbientPoint& p, const AmbientPoint& q) const
{
    // Half-chord forms; both agree with arccos / arccosh of the clamped inner
    // product but keep full relative precision near 0 (and near pi on S^3).
    const Vec4 diff = p.coords() - q.coords();
    if (k_ == 1) {
        const Vec4 sum = p.coords() + q.coords();
        return 2.0 * std::atan2(diff.norm(), sum.norm());
    }
    const double chord2 = std::max(0.0, inner(diff, diff));
    return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
}

TangentVec SpaceForm::initial_direction(const AmbientPoint& q, const AmbientPoint& p) const
{
    const double d = dist(q, p);
    if (d < 1e-14)
        throw UndefinedDirection("initial direction undefined for coincident points");
    if (k_ == 1 && d > std::numbers::pi - 1e-9)
        throw UndefinedDirection("initial direction undefined for antipodal points");
    Vec4 w = p.coords() - k_ * inner(q.coords(), p.coords()) * q.coords();
    const double n2 = inner(w, w);
    if (!(n2 > 0.0))
        throw UndefinedDirection("initial direction lost to cancellation");
    w /= std::sqrt(n2);
    return TangentVec{q, w};
}

Vec4 SpaceForm::orthogonal_complement(const Vec4& x, const Vec4& a, const Vec4& b) const
{
    Eigen::Matrix<double, 3, 4> rows;
    rows.row(0) = x.transpose();
    rows.row(1) = a.transpose();
    rows.row(2) = b.transpose();

    // Cofactor expansion along a fourth row: det[x; a; b; n] = |n|^2 >= 0.
    Vec4 n;
    for (int i = 0; i < 4; ++i) {
        Eigen::Matrix3d minor;
        for (int c = 0, mc = 0; c < 4; ++c) {
            if (c == i)
                continue;
            minor.col(mc++) = rows.col(c);
        }
        n[i] = ((3 + i) % 2 == 0 ? 1.0 : -1.0) * minor.determinant();
    }
    const double scale = x.norm() * a.norm() * b.norm();
    if (!(n.norm() > 1e-14 * std::max(scale, 1e-300)))
        throw RegularityError("tangent frame is degenerate");
    if (k_ == -1)
        n[0] = -n[0];
    const double q = inner(n, n);
    if (!(q > 0.0))
        throw RegularityError("normal direction is not spacelike");
    return n / std::sqrt(q);
}

double SpaceForm::ball_volume(double r) const
{
    if (k_ == 1)
        return std::numbers::pi * (2.0 * r - std::sin(2.0 * r));
    return std::numbers::pi * (std::sinh(2.0 * r) - 2.0 * r);
}

} // namespace tubeform
