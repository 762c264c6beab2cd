#include "tubeform/quadrature.hpp"

#include "tubeform/error.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace tubeform {

QuadratureRule gauss_legendre(int n, double a, double b)
{
    if (n < 1)
        throw InvalidInput("Gauss-Legendre rule needs at least one node");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    // P_n(x) and P_{n-1}(x) by the three-term recurrence.
    auto legendre = [n](double x) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, p0};
    };
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [pn, pm] = legendre(x);
            const double dx = pn / (n * (x * pn - pm) / (x * x - 1.0));
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const auto [pn, pm] = legendre(x);
        const double dp = n * (x * pn - pm) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = mid - half * x;
        rule.nodes[hi] = mid + half * x;
        rule.weights[lo] = half * w;
        rule.weights[hi] = half * w;
    }
    return rule;
}

QuadratureRule periodic_trapezoid(int n, double a, double b)
{
    if (n < 1)
        throw InvalidInput("trapezoidal rule needs at least one node");
    QuadratureRule rule;
    const double h = (b - a) / n;
    for (int i = 0; i < n; ++i) {
        rule.nodes.push_back(a + i * h);
        rule.weights.push_back(h);
    }
    return rule;
}

void CompensatedSum::add(double x)
{
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        correction_ += (sum_ - t) + x;
    else
        correction_ += (x - t) + sum_;
    sum_ = t;
}

} // namespace tubeform
