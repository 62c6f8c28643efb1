#include "discenv/disc.hpp"

#include <algorithm>
#include <cmath>

#include "discenv/error.hpp"
#include "discenv/kernels.hpp"
#include "discenv/roots.hpp"

namespace discenv {
namespace {

// Relative threshold for Taylor coefficients counted as vanishing.
constexpr double kVanishTol = 1e-9;

// g_k = f_k - y_k f_0 for k = 1..n.
std::vector<ComplexPoly> differences(const ProjectiveDisc& f, const Point& y) {
    if (static_cast<int>(y.size()) != f.dim()) throw ValidationError("y", "dimension mismatch");
    std::vector<ComplexPoly> g;
    g.reserve(y.size());
    for (int k = 1; k <= f.dim(); ++k) g.push_back(f.lift()[k] - f.denominator() * y[k - 1]);
    return g;
}

cplx newton_polish(const ComplexPoly& p, cplx z) {
    for (int it = 0; it < 3; ++it) {
        cplx v, dv;
        p.eval_with_derivative(z, v, dv);
        if (dv == cplx{}) break;
        const cplx step = v / dv;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag()) || std::abs(step) > 1e-6) break;
        z -= step;
    }
    return z;
}

} // namespace

PolyDisc PolyDisc::constant(const Point& x) {
    PolyDisc d;
    for (const auto& c : x) d.coords.push_back(ComplexPoly::constant(c));
    return d;
}

Point PolyDisc::eval(cplx zeta) const {
    Point out;
    out.reserve(coords.size());
    for (const auto& c : coords) out.push_back(c(zeta));
    return out;
}

bool PolyDisc::is_constant() const noexcept {
    return std::all_of(coords.begin(), coords.end(), [](const ComplexPoly& p) { return p.degree() == 0; });
}

ProjectiveDisc PolyDisc::to_projective() const {
    std::vector<ComplexPoly> lift;
    lift.reserve(coords.size() + 1);
    lift.push_back(ComplexPoly::constant(1.0));
    lift.insert(lift.end(), coords.begin(), coords.end());
    return ProjectiveDisc(std::move(lift));
}

ProjectiveDisc::ProjectiveDisc(std::vector<ComplexPoly> lift) : lift_(std::move(lift)) {
    if (lift_.size() < 2) throw ValidationError("lift", "a projective disc needs at least two lift components");
}

double ProjectiveDisc::max_coeff() const noexcept {
    double m = 0.0;
    for (const auto& p : lift_) m = std::max(m, p.max_abs_coeff());
    return m;
}

DiscPoint ProjectiveDisc::eval(cplx zeta) const {
    const cplx f0 = lift_[0](zeta);
    DiscPoint out;
    double scale = std::abs(f0);
    out.z.reserve(lift_.size() - 1);
    for (size_t k = 1; k < lift_.size(); ++k) {
        out.z.push_back(lift_[k](zeta));
        scale = std::max(scale, std::abs(out.z.back()));
    }
    if (std::abs(f0) <= 1e-12 * scale || f0 == cplx{}) {
        out.at_infinity = true;
        return out;
    }
    for (auto& v : out.z) v /= f0;
    return out;
}

Point ProjectiveDisc::center() const {
    auto p = eval(0.0);
    if (p.at_infinity) throw NumericError("disc center lies on the hyperplane at infinity");
    return p.z;
}

bool ProjectiveDisc::is_polynomial() const noexcept { return lift_[0].degree() == 0 && !lift_[0].is_zero(); }

bool ProjectiveDisc::is_constant(double rel_tol) const {
    auto c = eval(0.0);
    if (c.at_infinity) return false;
    const double scale = max_coeff();
    for (int k = 1; k <= dim(); ++k) {
        const ComplexPoly g = lift_[k] - lift_[0] * c.z[k - 1];
        if (g.max_abs_coeff() > rel_tol * scale) return false;
    }
    return true;
}

PolyDisc ProjectiveDisc::to_poly() const {
    if (!is_polynomial()) throw ValidationError("disc", "disc is not polynomial");
    const cplx inv = 1.0 / lift_[0].coeff(0);
    PolyDisc out;
    for (int k = 1; k <= dim(); ++k) out.coords.push_back(lift_[k] * inv);
    return out;
}

ProjectiveDisc ProjectiveDisc::rotated(double theta) const {
    std::vector<ComplexPoly> lift;
    for (const auto& p : lift_) {
        std::vector<cplx> c = p.coeffs();
        for (size_t j = 0; j < c.size(); ++j) c[j] *= std::polar(1.0, theta * static_cast<double>(j));
        lift.emplace_back(std::move(c));
    }
    return ProjectiveDisc(std::move(lift));
}

void BoundarySamples::point(int j, Point& out) const {
    out.resize(dim);
    for (int k = 0; k < dim; ++k) out[k] = at(k, j);
}

BoundarySamples sample_boundary(const ProjectiveDisc& f, const CircleGrid& grid) {
    BoundarySamples s;
    s.dim = f.dim();
    s.n = grid.n;
    const size_t n = static_cast<size_t>(grid.n);
    s.re.resize(n * s.dim);
    s.im.resize(n * s.dim);
    std::vector<double> dr(n), di(n), mod(n);
    const bool poly = f.is_polynomial();
    if (!poly) {
        simd::horner(f.denominator().coeffs(), grid.re, grid.im, dr, di);
        simd::abs2(dr, di, mod);
        const double m = *std::min_element(mod.begin(), mod.end());
        s.f0_clearance = std::sqrt(m) / std::max(f.max_coeff(), 1e-300);
    } else {
        s.f0_clearance = std::abs(f.denominator().coeff(0)) / std::max(f.max_coeff(), 1e-300);
    }
    const cplx inv = poly ? 1.0 / f.denominator().coeff(0) : cplx{};
    std::vector<cplx> scaled;
    for (int k = 0; k < s.dim; ++k) {
        std::span<double> outr(s.re.data() + k * n, n), outi(s.im.data() + k * n, n);
        if (poly) {
            scaled = f.lift()[k + 1].coeffs();
            for (auto& c : scaled) c *= inv;
            simd::horner(scaled, grid.re, grid.im, outr, outi);
        } else {
            std::vector<double> nr(n), ni(n);
            simd::horner(f.lift()[k + 1].coeffs(), grid.re, grid.im, nr, ni);
            simd::divide(nr, ni, dr, di, outr, outi);
        }
    }
    return s;
}

bool boundary_in_affine_space(const ProjectiveDisc& f, int n) {
    if (f.is_polynomial()) return true;
    auto grid = circle_grid(n);
    std::vector<double> dr(n), di(n), mod(n);
    simd::horner(f.denominator().coeffs(), grid->re, grid->im, dr, di);
    simd::abs2(dr, di, mod);
    const double thr = kBoundaryClearance * f.max_coeff();
    return *std::min_element(mod.begin(), mod.end()) >= thr * thr;
}

void Divisor::validate() const {
    for (const auto& p : points) {
        if (!(std::abs(p.z) < 1.0)) throw ValidationError("divisor", "point outside the open unit disc");
        if (p.mult < 1) throw ValidationError("divisor", "multiplicity must be positive");
    }
}

int multiplicity(const ProjectiveDisc& f, cplx z0) {
    if (f.is_constant()) throw ValidationError("disc", "multiplicity undefined");
    auto y = f.eval(z0);
    if (y.at_infinity) throw ValidationError("z0", "point maps to the hyperplane at infinity");
    auto g = differences(f, y.z);
    const double scale = f.max_coeff();
    int order = std::numeric_limits<int>::max();
    for (const auto& gk : g) {
        if (gk.max_abs_coeff() <= kVanishTol * scale) continue;
        const auto shifted = gk.taylor_shift(z0);
        int j = 0;
        while (j <= shifted.degree() && std::abs(shifted.coeff(j)) <= kVanishTol * scale) ++j;
        order = std::min(order, j);
    }
    return order;
}

int multiplicity(const PolyDisc& f, cplx z0) { return multiplicity(f.to_projective(), z0); }

Divisor infinity_divisor(const ProjectiveDisc& f) {
    const ComplexPoly& f0 = f.denominator();
    const double scale = f.max_coeff();
    if (f0.max_abs_coeff() <= 1e-14 * scale || f0.is_zero()) throw ValidationError("disc", "disc contained in H");
    Divisor d;
    if (f0.degree() == 0) return d;
    const auto rs = poly_roots(f0);
    for (const auto& r : rs.roots) {
        if (!(std::abs(r.location) < 1.0)) continue;
        // Common roots of the whole lift cancel.
        int common = std::numeric_limits<int>::max();
        for (int k = 1; k <= f.dim(); ++k) {
            const auto& fk = f.lift()[k];
            if (fk.is_zero()) continue;
            common = std::min(common, fk.vanishing_order(r.location, 1e-7));
        }
        if (common == std::numeric_limits<int>::max()) common = 0;
        const int m = r.multiplicity - common;
        if (m > 0) d.points.push_back({r.location, m});
    }
    return d;
}

Divisor preimages(const ProjectiveDisc& f, const Point& y, double tol) {
    auto g = differences(f, y);
    const double scale = std::max(f.max_coeff(), 1e-300);
    std::vector<int> active;
    for (size_t k = 0; k < g.size(); ++k) {
        g[k] = g[k].trimmed(1e-14);
        if (g[k].max_abs_coeff() > 1e-13 * scale) active.push_back(static_cast<int>(k));
    }
    if (active.empty()) throw ValidationError("disc", "constant disc has no isolated preimages");
    // Driver: lowest-degree nonzero difference.
    int drv = active.front();
    for (int k : active)
        if (g[k].degree() < g[drv].degree()) drv = k;
    Divisor d;
    if (g[drv].degree() == 0) return d;
    const auto rs = poly_roots(g[drv]);
    const double ynorm = [&] {
        double m = 1.0;
        for (auto v : y) m = std::max(m, std::abs(v));
        return m;
    }();
    for (const auto& r : rs.roots) {
        cplx z = r.multiplicity == 1 ? newton_polish(g[drv], r.location) : r.location;
        if (!(std::abs(z) < 1.0)) continue;
        const cplx f0 = f.denominator()(z);
        if (std::abs(f0) <= 1e-12 * scale) continue;
        bool hit = true;
        int mult = r.multiplicity;
        for (int k : active) {
            if (k == drv) continue;
            const double res = std::abs(g[k](z) / f0);
            if (res > tol * ynorm) {
                hit = false;
                break;
            }
            mult = std::min(mult, std::max(1, g[k].vanishing_order(z, 1e-6)));
        }
        if (hit) d.points.push_back({z, mult});
    }
    return d;
}

Divisor preimages(const PolyDisc& f, const Point& y, double tol) { return preimages(f.to_projective(), y, tol); }

ProjectiveDisc blaschke_line_disc(const Point& z, double rho) {
    double nz = 0.0;
    for (auto v : z) nz += std::norm(v);
    nz = std::sqrt(nz);
    if (!(rho > 0.0) || !(nz > rho)) throw ValidationError("z", "blaschke_line_disc needs |z| > rho > 0");
    const double a = rho / nz;
    // f = -rho w (1 - a zeta) / (zeta - a), f(0) = z.
    std::vector<ComplexPoly> lift{ComplexPoly({-a, 1.0})};
    for (auto v : z) {
        const cplx w = v / nz;
        lift.push_back(ComplexPoly({-rho * w, rho * a * w}));
    }
    return ProjectiveDisc(std::move(lift));
}

} // namespace discenv
