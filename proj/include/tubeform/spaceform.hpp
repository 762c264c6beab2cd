#pragma once

#include <Eigen/Core>

namespace tubeform {

using Vec4 = Eigen::Vector4d;

/// S_k(t): sin t on the sphere, sinh t in hyperbolic space.
double sk(double t, int k);
/// C_k(t) = S_k'(t).
double ck(double t, int k);

/// A point of the model: a unit vector of R^4 (k = +1) or a point on the
/// upper sheet of the hyperboloid <x,x>_L = -1 (k = -1).
class AmbientPoint {
public:
    const Vec4& coords() const { return x_; }
    double operator[](int i) const { return x_[i]; }

private:
    friend class SpaceForm;
    explicit AmbientPoint(const Vec4& x) : x_(x) {}
    Vec4 x_;
};

/// A vector tangent to the model at `base` (model-orthogonal to it).
struct TangentVec {
    AmbientPoint base;
    Vec4 v;
};

/// The simply connected 3-dimensional space form of curvature k = +1 or -1,
/// realised linearly in R^4: the unit sphere with the Euclidean form or the
/// hyperboloid with the Lorentzian form of signature (-,+,+,+).
class SpaceForm {
public:
    /// Throws InvalidInput unless k is +1 or -1.
    static SpaceForm make(int k);
    static SpaceForm sphere() { return SpaceForm(1); }
    static SpaceForm hyperbolic() { return SpaceForm(-1); }

    int k() const { return k_; }
    bool is_sphere() const { return k_ == 1; }

    /// Model bilinear form (Euclidean for k = +1, Lorentzian for k = -1).
    double inner(const Vec4& a, const Vec4& b) const
    {
        const double tail = a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
        return k_ == 1 ? a[0] * b[0] + tail : tail - a[0] * b[0];
    }

    /// Validates x against the model constraint. Drift up to 1e-4 is
    /// rescaled back onto the model; anything larger throws InvalidInput.
    AmbientPoint point(const Vec4& x) const;
    /// Like point() but never throws; used on hot paths where x is known to
    /// be near the model.
    AmbientPoint project(const Vec4& x) const;
    /// (1,0,0,0), the base point of both models.
    AmbientPoint origin() const { return AmbientPoint(Vec4(1.0, 0.0, 0.0, 0.0)); }

    /// Throws InvalidInput when v is not model-orthogonal to p within 1e-12
    /// (scaled by |v|).
    TangentVec tangent(const AmbientPoint& p, const Vec4& v) const;

    /// C_k(t) p + S_k(t) u. u must have unit model length.
    AmbientPoint geodesic(const AmbientPoint& p, const TangentVec& u, double t) const;
    /// Velocity of the geodesic above at time t: C_k(t) u - k S_k(t) p.
    Vec4 geodesic_velocity(const AmbientPoint& p, const TangentVec& u, double t) const;

    double dist(const AmbientPoint& p, const AmbientPoint& q) const;

    /// Unit tangent u at q with geodesic(q, u, dist(q, p)) == p. Throws
    /// UndefinedDirection for coincident or (sphere) antipodal points.
    TangentVec initial_direction(const AmbientPoint& q, const AmbientPoint& p) const;

    /// Unit vector, model-orthogonal to x, a and b. Its sign is fixed by the
    /// Euclidean orientation of (x, a, b, n). Throws RegularityError when
    /// the three inputs are linearly dependent.
    Vec4 orthogonal_complement(const Vec4& x, const Vec4& a, const Vec4& b) const;

    /// Volume of a geodesic ball of radius r.
    double ball_volume(double r) const;

    /// Vol(S^3) = 2 pi^2.
    static constexpr double sphere_volume = 2.0 * 3.14159265358979323846 * 3.14159265358979323846;

private:
    explicit SpaceForm(int k) : k_(k) {}
    int k_;
};

} // namespace tubeform
