#pragma once

#include "tubeform/surface.hpp"

namespace tubeform {

// Analytically known closed surfaces used as fixtures and by the CLI.
// Every constructor returns the surface with its outward (geodesic
// spheres), or toward-the-(x3,x4)-circle (flat tori) normal; callers
// normalise the orientation before applying the tube formulas.

/// Distance sphere of radius r about the model origin, as a two-cap polar
/// atlas split at the equator. Requires 0 < r < pi (k = +1) or r > 0.
Surface geodesic_sphere(int k, double r, int resolution = 64);

/// Product torus S^1(a) x S^1(b) in S^3, a^2 + b^2 = 1, as one
/// doubly-periodic chart (u, v) -> (a cos(u/a), a sin(u/a), b cos(v/b), b sin(v/b)).
Surface flat_torus(double a, double b, int resolution = 64);

/// The minimal flat torus a = b = sqrt(2)/2.
Surface clifford_torus(int resolution = 64);

/// Radial graph r0 (1 + eps m) over the unit 2-sphere of directions at the
/// origin. Mode 1: m = cos(theta); mode 2: m = sin^2(theta) sin(2 phi);
/// mode 3: m = sin^2(theta) cos(theta) sin(2 phi). Requires |eps| < 0.3.
Surface perturbed_sphere(int k, double r0, double eps, int mode = 2, int resolution = 64);

} // namespace tubeform
