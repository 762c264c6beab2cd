#pragma once

#include <cmath>

namespace tubeform {

// Second-order forward-mode jet in two variables (u, v): value plus first
// and second partials. Catalog immersions are written once as templates and
// evaluated on Jet2 to get exact derivative suppliers.
struct Jet2 {
    double v = 0.0;
    double du = 0.0, dv = 0.0;
    double duu = 0.0, duv = 0.0, dvv = 0.0;

    Jet2() = default;
    Jet2(double value) : v(value) {} // NOLINT: implicit constant lift

    static Jet2 var_u(double u) { Jet2 j(u); j.du = 1.0; return j; }
    static Jet2 var_v(double v) { Jet2 j(v); j.dv = 1.0; return j; }
};

// Chain rule for a scalar function with value f0, slope f1, curvature f2 at a.v.
inline Jet2 chain(const Jet2& a, double f0, double f1, double f2)
{
    Jet2 r;
    r.v = f0;
    r.du = f1 * a.du;
    r.dv = f1 * a.dv;
    r.duu = f2 * a.du * a.du + f1 * a.duu;
    r.duv = f2 * a.du * a.dv + f1 * a.duv;
    r.dvv = f2 * a.dv * a.dv + f1 * a.dvv;
    return r;
}

inline Jet2 operator+(const Jet2& a, const Jet2& b)
{
    Jet2 r;
    r.v = a.v + b.v;
    r.du = a.du + b.du;
    r.dv = a.dv + b.dv;
    r.duu = a.duu + b.duu;
    r.duv = a.duv + b.duv;
    r.dvv = a.dvv + b.dvv;
    return r;
}

inline Jet2 operator-(const Jet2& a)
{
    Jet2 r;
    r.v = -a.v;
    r.du = -a.du;
    r.dv = -a.dv;
    r.duu = -a.duu;
    r.duv = -a.duv;
    r.dvv = -a.dvv;
    return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) { return a + (-b); }

inline Jet2 operator*(const Jet2& a, const Jet2& b)
{
    Jet2 r;
    r.v = a.v * b.v;
    r.du = a.du * b.v + a.v * b.du;
    r.dv = a.dv * b.v + a.v * b.dv;
    r.duu = a.duu * b.v + 2.0 * a.du * b.du + a.v * b.duu;
    r.duv = a.duv * b.v + a.du * b.dv + a.dv * b.du + a.v * b.duv;
    r.dvv = a.dvv * b.v + 2.0 * a.dv * b.dv + a.v * b.dvv;
    return r;
}

inline Jet2 reciprocal(const Jet2& a)
{
    const double inv = 1.0 / a.v;
    return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

inline Jet2 sin(const Jet2& a)
{
    const double s = std::sin(a.v), c = std::cos(a.v);
    return chain(a, s, c, -s);
}

inline Jet2 cos(const Jet2& a)
{
    const double s = std::sin(a.v), c = std::cos(a.v);
    return chain(a, c, -s, -c);
}

inline Jet2 sinh(const Jet2& a)
{
    const double s = std::sinh(a.v), c = std::cosh(a.v);
    return chain(a, s, c, s);
}

inline Jet2 cosh(const Jet2& a)
{
    const double s = std::sinh(a.v), c = std::cosh(a.v);
    return chain(a, c, s, c);
}

inline Jet2 sqrt(const Jet2& a)
{
    const double s = std::sqrt(a.v);
    return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}

} // namespace tubeform
