#pragma once

#include <vector>

#include "discenv/complex_poly.hpp"

namespace discenv {

struct Root {
    cplx location;
    int multiplicity = 1;
};

struct RootSet {
    std::vector<Root> roots;

    int total_multiplicity() const noexcept {
        int s = 0;
        for (const auto& r : roots) s += r.multiplicity;
        return s;
    }
};

struct RootOptions {
    /// Approximations closer than cluster_tol * max(1, |z|) are always merged.
    double cluster_tol = 1e-8;
    int max_iterations = 600;
};

/// All complex roots of p with multiplicities (Aberth-Ehrlich iteration).
///
/// Approximations whose inclusion discs overlap are merged into a single root
/// at their centroid; the merged count is its multiplicity. Exact zero low
/// order coefficients are factored out as a root at 0.
///
/// Throws ValidationError("p", "undefined root set") for the zero polynomial and
/// NumericError listing residuals when the iteration does not converge.
RootSet poly_roots(const ComplexPoly& p, const RootOptions& opts = {});

} // namespace discenv
