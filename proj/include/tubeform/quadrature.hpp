#pragma once

#include <cstddef>
#include <vector>

namespace tubeform {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n, double a, double b);

/// n-point trapezoidal rule over one full period [a, b) (left endpoints);
/// spectrally accurate for smooth periodic integrands.
QuadratureRule periodic_trapezoid(int n, double a, double b);

/// Neumaier (improved Kahan) running sum. Adding in a fixed order keeps
/// results bit-reproducible.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

} // namespace tubeform
