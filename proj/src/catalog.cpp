#include "tubeform/catalog.hpp"

#include "tubeform/error.hpp"
#include "tubeform/jet.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace tubeform {

namespace {

using std::numbers::pi;

template <typename T>
using Point4 = std::array<T, 4>;

// Builds a chart whose derivative suppliers come from evaluating the generic
// immersion on jets.
template <typename Immersion>
Chart jet_chart(Immersion f, double u0, double u1, bool pu, double v0, double v1, bool pv)
{
    Chart c;
    c.u0 = u0;
    c.u1 = u1;
    c.v0 = v0;
    c.v1 = v1;
    c.periodic_u = pu;
    c.periodic_v = pv;
    c.immersion = [f](double u, double v) {
        const Point4<double> x = f(u, v);
        return Vec4(x[0], x[1], x[2], x[3]);
    };
    auto jets = [f](double u, double v) { return f(Jet2::var_u(u), Jet2::var_v(v)); };
    c.first_derivs = [jets](double u, double v) {
        const Point4<Jet2> x = jets(u, v);
        return FirstDerivs{Vec4(x[0].du, x[1].du, x[2].du, x[3].du), Vec4(x[0].dv, x[1].dv, x[2].dv, x[3].dv)};
    };
    c.second_derivs = [jets](double u, double v) {
        const Point4<Jet2> x = jets(u, v);
        return SecondDerivs{Vec4(x[0].duu, x[1].duu, x[2].duu, x[3].duu),
                            Vec4(x[0].duv, x[1].duv, x[2].duv, x[3].duv),
                            Vec4(x[0].dvv, x[1].dvv, x[2].dvv, x[3].dvv)};
    };
    return c;
}

template <typename T>
T S(const T& t, int k)
{
    using std::sin;
    using std::sinh;
    return k == 1 ? sin(t) : sinh(t);
}

template <typename T>
T C(const T& t, int k)
{
    using std::cos;
    using std::cosh;
    return k == 1 ? cos(t) : cosh(t);
}

// Point at geodesic distance `radius` from the origin in direction
// (sin th cos ph, sin th sin ph, cos th).
template <typename T>
Point4<T> polar_point(const T& radius, const T& th, const T& ph, int k)
{
    using std::cos;
    using std::sin;
    const T s = S(radius, k);
    return {C(radius, k), s * sin(th) * cos(ph), s * sin(th) * sin(ph), s * cos(th)};
}

// Flips chart orientations so that every raw normal has a positive model
// product with `reference` at the chart centre.
template <typename Reference>
void orient_atlas(const SpaceForm& Q, std::vector<Chart>& charts, Reference reference)
{
    for (Chart& c : charts) {
        const double u = 0.5 * (c.u0 + c.u1) + 0.1 * c.span_u();
        const double v = 0.5 * (c.v0 + c.v1) + 0.1 * c.span_v();
        const FirstDerivs d = c.first_derivs(u, v);
        const Vec4 x = c.immersion(u, v);
        const Vec4 n = Q.orthogonal_complement(x, d.fu, d.fv);
        c.orientation = Q.inner(n, reference(u, v)) >= 0.0 ? 1 : -1;
    }
}

void check_radius(int k, double r)
{
    if (!(r > 0.0) || (k == 1 && !(r < pi)))
        throw InvalidInput("geodesic sphere radius out of range: " + std::to_string(r));
}

template <typename RadiusFn>
std::vector<Chart> two_cap_atlas(const SpaceForm& Q, RadiusFn radius)
{
    const int k = Q.k();
    auto immersion = [k, radius](auto th, auto ph) { return polar_point(radius(th, ph), th, ph, k); };
    std::vector<Chart> charts;
    charts.push_back(jet_chart(immersion, 0.0, 0.5 * pi, false, 0.0, 2.0 * pi, true));
    charts.push_back(jet_chart(immersion, 0.5 * pi, pi, false, 0.0, 2.0 * pi, true));
    // Outward radial velocity -k S_k(r) e0 + C_k(r) w.
    orient_atlas(Q, charts, [k, radius](double th, double ph) {
        const double r = radius(th, ph);
        const double s = C(r, k);
        return Vec4(-k * S(r, k), s * std::sin(th) * std::cos(ph), s * std::sin(th) * std::sin(ph),
                    s * std::cos(th));
    });
    return charts;
}

} // namespace

Surface geodesic_sphere(int k, double r, int resolution)
{
    const SpaceForm Q = SpaceForm::make(k);
    check_radius(k, r);
    auto radius = [r](auto th, auto) { return decltype(th)(r); };
    return Surface(Q, two_cap_atlas(Q, radius), resolution, "gsphere");
}

Surface flat_torus(double a, double b, int resolution)
{
    if (!(a > 0.0) || !(b > 0.0) || std::abs(a * a + b * b - 1.0) > 1e-9)
        throw InvalidInput("flat torus needs a, b > 0 with a^2 + b^2 = 1");
    auto immersion = [a, b](auto u, auto v) {
        using std::cos;
        using std::sin;
        using T = decltype(u);
        return Point4<T>{T(a) * cos(u / T(a)), T(a) * sin(u / T(a)), T(b) * cos(v / T(b)), T(b) * sin(v / T(b))};
    };
    std::vector<Chart> charts{jet_chart(immersion, 0.0, 2.0 * pi * a, true, 0.0, 2.0 * pi * b, true)};
    // Normal (-b cos, -b sin, a cos, a sin): principal curvatures -a/b, b/a.
    orient_atlas(SpaceForm::sphere(), charts, [a, b](double u, double v) {
        return Vec4(-b * std::cos(u / a), -b * std::sin(u / a), a * std::cos(v / b), a * std::sin(v / b));
    });
    return Surface(SpaceForm::sphere(), std::move(charts), resolution, "ftorus");
}

Surface clifford_torus(int resolution)
{
    return flat_torus(std::sqrt(0.5), std::sqrt(0.5), resolution);
}

Surface perturbed_sphere(int k, double r0, double eps, int mode, int resolution)
{
    const SpaceForm Q = SpaceForm::make(k);
    if (!(std::abs(eps) < 0.3))
        throw InvalidInput("perturbation amplitude must satisfy |eps| < 0.3");
    if (mode < 1 || mode > 3)
        throw InvalidInput("perturbation mode must be 1, 2 or 3");
    check_radius(k, r0);
    if (k == 1 && !(r0 * (1.0 + std::abs(eps)) < pi))
        throw InvalidInput("perturbed sphere would reach the antipode");
    auto radius = [r0, eps, mode](auto th, auto ph) {
        using std::cos;
        using std::sin;
        using T = decltype(th);
        const T s = sin(th);
        T m = cos(th);
        if (mode == 2)
            m = s * s * sin(T(2.0) * ph);
        else if (mode == 3)
            m = s * s * cos(th) * sin(T(2.0) * ph);
        return T(r0) * (T(1.0) + T(eps) * m);
    };
    return Surface(Q, two_cap_atlas(Q, radius), resolution, "psphere");
}

} // namespace tubeform
