#pragma once

#include <functional>
#include <span>

#include "discenv/complex_poly.hpp"

namespace discenv {

/// Closed curve s in [0, 1) -> point in C, traversed counter-clockwise for a
/// positively oriented region.
struct Contour {
    std::function<cplx(double)> point;

    static Contour circle(cplx center, double radius);
    /// Boundary of {r_min < |z| < r_max, arg z in [t0, t1]} (t1 - t0 < 2 pi).
    static Contour annular_sector(double r_min, double r_max, double t0, double t1);
};

/// Winding number around 0 of the closed polygon through `values`.
/// Throws NumericError if a sample has modulus below `safety` or if two
/// consecutive samples differ in argument by more than 3pi/4 (undersampled).
int winding_count(std::span<const cplx> values, double safety = 1e-12);

/// Winding number of h along the contour; the parameter interval is refined
/// adaptively until every step turns by at most pi/4.
/// Throws NumericError("contour too close to zero set") when |h| on the
/// contour drops below safety * max |h|.
int winding_count(const std::function<cplx(cplx)>& h, const Contour& contour, int min_samples = 256,
                  double safety = 1e-10);

} // namespace discenv
