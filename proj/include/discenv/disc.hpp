#pragma once

#include <span>
#include <vector>

#include "discenv/complex_poly.hpp"
#include "discenv/quadrature.hpp"

namespace discenv {

/// Point of C^n.
using Point = std::vector<cplx>;

class ProjectiveDisc;

/// Disc with polynomial coordinates f = (f_1, ..., f_n) on the closed unit disc.
struct PolyDisc {
    std::vector<ComplexPoly> coords;

    PolyDisc() = default;
    explicit PolyDisc(std::vector<ComplexPoly> c) : coords(std::move(c)) {}
    static PolyDisc constant(const Point& x);

    int dim() const noexcept { return static_cast<int>(coords.size()); }
    Point eval(cplx zeta) const;
    Point center() const { return eval(cplx{}); }
    bool is_constant() const noexcept;
    ProjectiveDisc to_projective() const;
};

/// Evaluation of a projective disc: an affine point or the hyperplane at infinity.
struct DiscPoint {
    bool at_infinity = false;
    Point z;
};

/// Disc into P^n given by a homogeneous lift (f_0, f_1, ..., f_n); the affine
/// chart is f = (f_1/f_0, ..., f_n/f_0) and H = {f_0 = 0} is the hyperplane at
/// infinity. Polynomial discs are the case f_0 = 1.
class ProjectiveDisc {
public:
    ProjectiveDisc() = default;
    explicit ProjectiveDisc(std::vector<ComplexPoly> lift);

    int dim() const noexcept { return static_cast<int>(lift_.size()) - 1; }
    const std::vector<ComplexPoly>& lift() const noexcept { return lift_; }
    const ComplexPoly& denominator() const noexcept { return lift_.front(); }
    double max_coeff() const noexcept;

    DiscPoint eval(cplx zeta) const;
    /// f(0); throws NumericError if the center lies on H.
    Point center() const;
    /// True when f_0 is a nonzero constant.
    bool is_polynomial() const noexcept;
    /// True when every coordinate f_k/f_0 is constant.
    bool is_constant(double rel_tol = 1e-12) const;
    PolyDisc to_poly() const;
    /// Precomposition with the rotation zeta -> e^{i theta} zeta.
    ProjectiveDisc rotated(double theta) const;

private:
    std::vector<ComplexPoly> lift_;
};

/// Affine boundary values f(zeta_j) on a circle grid, coordinate-major
/// (re[k * n + j] is coordinate k at node j).
struct BoundarySamples {
    int dim = 0;
    int n = 0;
    std::vector<double> re, im;
    /// min_j |f_0(zeta_j)| / max lift coefficient.
    double f0_clearance = 0.0;

    cplx at(int k, int j) const { return {re[static_cast<size_t>(k) * n + j], im[static_cast<size_t>(k) * n + j]}; }
    void point(int j, Point& out) const;
};

/// Relative size of |f_0| on the circle below which the boundary is treated as
/// touching H.
inline constexpr double kBoundaryClearance = 1e-6;

BoundarySamples sample_boundary(const ProjectiveDisc& f, const CircleGrid& grid);
/// |f_0| >= kBoundaryClearance * max coefficient on every node of an n-grid.
bool boundary_in_affine_space(const ProjectiveDisc& f, int n = kDefaultCircleNodes);

/// Finite list of (point of the open unit disc, multiplicity).
struct DivisorPoint {
    cplx z;
    int mult = 1;
};

struct Divisor {
    std::vector<DivisorPoint> points;

    int degree() const noexcept {
        int s = 0;
        for (const auto& p : points) s += p.mult;
        return s;
    }
    bool empty() const noexcept { return points.empty(); }
    /// Throws ValidationError unless every point lies in the open unit disc.
    void validate() const;
};

/// Order of vanishing of f - f(z0) at z0 (minimum over coordinates).
/// Throws ValidationError("disc", "multiplicity undefined") for constant discs.
int multiplicity(const ProjectiveDisc& f, cplx z0);
int multiplicity(const PolyDisc& f, cplx z0);

/// Points of the open unit disc mapped to H, with intersection multiplicities.
/// Common roots of the whole lift are removable and excluded.
/// Throws ValidationError("disc", "disc contained in H") when f_0 vanishes identically.
Divisor infinity_divisor(const ProjectiveDisc& f);

/// All z in the open unit disc with f(z) = y, with multiplicities.
/// `tol` is the relative residual accepted after Newton polishing.
/// Throws ValidationError("disc", ...) for a constant disc.
Divisor preimages(const ProjectiveDisc& f, const Point& y, double tol = 1e-9);
Divisor preimages(const PolyDisc& f, const Point& y, double tol = 1e-9);

/// The one-pole disc zeta -> rho * w / B_a(zeta) along the complex line
/// through 0 and z, with w = z/|z|, a = rho/|z| and B_a the Blaschke factor.
/// Its boundary lies on the sphere of radius rho, its center is z, and
/// J = log|z| - log(rho). Requires |z| > rho > 0.
ProjectiveDisc blaschke_line_disc(const Point& z, double rho);

} // namespace discenv
