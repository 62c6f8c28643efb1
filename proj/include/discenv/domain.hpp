#pragma once

#include <variant>
#include <vector>

#include "discenv/disc.hpp"

namespace discenv {

struct BallSet {
    Point center;
    double radius = 1.0;
};

struct PolydiscSet {
    Point center;
    std::vector<double> radii;
};

/// {x : a_i . x < b_i for all i}, with x = (Re z_1, Im z_1, ..., Re z_n, Im z_n).
struct HalfspaceSet {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
};

using DomainPrimitive = std::variant<BallSet, PolydiscSet, HalfspaceSet>;

/// Open subset of C^n given as a union of balls, polydiscs and intersections
/// of open real half-spaces.
class DomainSpec {
public:
    DomainSpec() = default;
    DomainSpec(int dim, std::vector<DomainPrimitive> components);

    static DomainSpec ball(Point center, double radius);
    static DomainSpec unit_ball(int dim);
    static DomainSpec polydisc(Point center, std::vector<double> radii);
    static DomainSpec unit_polydisc(int dim);
    static DomainSpec disc(cplx center, double radius) { return ball({center}, radius); }

    int dim() const noexcept { return dim_; }
    const std::vector<DomainPrimitive>& components() const noexcept { return components_; }
    bool empty() const noexcept { return components_.empty(); }

    /// Signed gap: < 0 exactly on the open set. For a ball it is the
    /// Euclidean signed distance; for a polydisc the max over coordinates of
    /// |z_j - c_j| - r_j; for half-spaces the max normalized residual; for a
    /// union the minimum over components.
    double clearance(std::span<const cplx> z) const;
    bool contains(std::span<const cplx> z) const { return clearance(z) < 0.0; }
    /// Largest clearance over the boundary samples of a disc.
    double boundary_clearance(const BoundarySamples& s) const;
    /// True only for a single component (every primitive is convex).
    bool convex() const noexcept { return components_.size() == 1; }
    /// Radius of a ball around the origin containing the closure (+inf when
    /// unbounded).
    double bounding_radius() const;
    /// Some point of the set: the center of the first ball or polydisc, or a
    /// point of a half-space system found by cyclic projection.
    Point interior_point() const;

private:
    int dim_ = 0;
    std::vector<DomainPrimitive> components_;
};

} // namespace discenv
