#pragma once

#include "tubeform/spaceform.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tubeform {

/// Which component of Q_k minus M: plus is where the oriented normal points.
enum class Side { plus, minus, both };

inline int side_sign(Side side) { return side == Side::minus ? -1 : 1; }
const char* to_string(Side side);

struct FirstDerivs {
    Vec4 fu, fv;
};

struct SecondDerivs {
    Vec4 fuu, fuv, fvv;
};

/// Immersion value with first and second partials at one parameter point.
struct ChartJet {
    Vec4 f, fu, fv, fuu, fuv, fvv;
};

/// One parametric patch [u0,u1] x [v0,v1] -> model. Derivative suppliers
/// are optional; missing ones are replaced by central differences.
struct Chart {
    double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
    bool periodic_u = false, periodic_v = false;
    std::function<Vec4(double, double)> immersion;
    std::function<FirstDerivs(double, double)> first_derivs;
    std::function<SecondDerivs(double, double)> second_derivs;
    /// +1 or -1 so that the raw normals of all charts in an atlas agree.
    int orientation = 1;

    double span_u() const { return u1 - u0; }
    double span_v() const { return v1 - v0; }

    ChartJet jet(double u, double v) const;
};

struct ChartLocation {
    int chart = 0;
    double u = 0.0, v = 0.0;
};

/// Position, tangent frame and oriented unit normal at a parameter point.
struct Frame {
    AmbientPoint position;
    Vec4 fu, fv;
    TangentVec normal;
    double area_element;
};

struct PointData {
    AmbientPoint position;
    TangentVec normal;
    double lambda1; ///< smaller principal curvature
    double lambda2;
    double H;            ///< (lambda1 + lambda2) / 2
    double K;            ///< intrinsic curvature k + lambda1 * lambda2
    double area_element; ///< sqrt(det g) per unit parameter area
};

/// A compact embedded surface in Q_k given by a declared-closed atlas.
class Surface {
public:
    /// Validates every chart on a cell-centred grid: the immersion must lie on
    /// the model within 1e-10 and det g must exceed 1e-12. Throws
    /// RegularityError otherwise, InvalidInput for a bad resolution.
    Surface(SpaceForm space, std::vector<Chart> charts, int resolution = 64, std::string name = {});

    const SpaceForm& space() const { return space_; }
    const std::vector<Chart>& charts() const { return charts_; }
    const Chart& chart(int i) const { return charts_.at(static_cast<std::size_t>(i)); }
    int orientation_sign() const { return orientation_sign_; }
    int resolution() const { return resolution_; }
    const std::string& name() const { return name_; }

    Surface with_orientation(int sign) const;
    Surface flipped() const { return with_orientation(-orientation_sign_); }
    Surface with_resolution(int resolution) const;
    /// Same surface with all derivative suppliers dropped (finite differences).
    Surface without_derivatives() const;

    /// Cell-centred n x n parameter grid on every chart.
    std::vector<ChartLocation> validation_grid(int n = 16) const;

private:
    SpaceForm space_;
    std::vector<Chart> charts_;
    int orientation_sign_ = 1;
    int resolution_ = 64;
    std::string name_;
};

Frame frame(const Surface& s, const ChartLocation& at);
Frame frame(const Surface& s, const ChartLocation& at, const ChartJet& jet);

/// Full curvature record: shape operator g^-1 h with h_ij = <f_ij, eta>,
/// eigenvalues sorted ascending. Throws RegularityError for det g <= 1e-12.
PointData point_data(const Surface& s, const ChartLocation& at);

/// Flips the orientation iff the total mean curvature is negative beyond
/// 1e-9 * A(M); otherwise returns s unchanged.
Surface normalize_orientation(const Surface& s);

} // namespace tubeform
