#include "discenv/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "discenv/error.hpp"

namespace discenv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ball_gap(const BallSet& b, std::span<const cplx> z) {
    double s = 0.0;
    for (size_t k = 0; k < z.size(); ++k) s += std::norm(z[k] - b.center[k]);
    return std::sqrt(s) - b.radius;
}

double polydisc_gap(const PolydiscSet& p, std::span<const cplx> z) {
    double g = -kInf;
    for (size_t k = 0; k < z.size(); ++k) g = std::max(g, std::abs(z[k] - p.center[k]) - p.radii[k]);
    return g;
}

double halfspace_gap(const HalfspaceSet& h, std::span<const cplx> z) {
    double g = -kInf;
    for (size_t i = 0; i < h.a.size(); ++i) {
        double dot = 0.0, nrm = 0.0;
        for (size_t k = 0; k < z.size(); ++k) {
            dot += h.a[i][2 * k] * z[k].real() + h.a[i][2 * k + 1] * z[k].imag();
            nrm += h.a[i][2 * k] * h.a[i][2 * k] + h.a[i][2 * k + 1] * h.a[i][2 * k + 1];
        }
        g = std::max(g, (dot - h.b[i]) / std::sqrt(nrm));
    }
    return g;
}

} // namespace

DomainSpec::DomainSpec(int dim, std::vector<DomainPrimitive> components)
    : dim_(dim), components_(std::move(components)) {
    if (dim_ < 1) throw ValidationError("dim", "domain dimension must be positive");
    for (const auto& c : components_) {
        if (auto* b = std::get_if<BallSet>(&c)) {
            if (static_cast<int>(b->center.size()) != dim_) throw ValidationError("center", "dimension mismatch");
            if (!(b->radius > 0.0)) throw ValidationError("radius", "ball radius must be positive");
        } else if (auto* p = std::get_if<PolydiscSet>(&c)) {
            if (static_cast<int>(p->center.size()) != dim_ || static_cast<int>(p->radii.size()) != dim_)
                throw ValidationError("center", "dimension mismatch");
            for (double r : p->radii)
                if (!(r > 0.0)) throw ValidationError("radii", "polydisc radii must be positive");
        } else {
            const auto& h = std::get<HalfspaceSet>(c);
            if (h.a.empty() || h.a.size() != h.b.size()) throw ValidationError("halfspaces", "malformed system");
            for (const auto& row : h.a) {
                if (static_cast<int>(row.size()) != 2 * dim_)
                    throw ValidationError("halfspaces", "each row needs 2*dim real coefficients");
                double nrm = 0.0;
                for (double v : row) nrm += v * v;
                if (!(nrm > 0.0)) throw ValidationError("halfspaces", "zero normal vector");
            }
        }
    }
}

DomainSpec DomainSpec::ball(Point center, double radius) {
    const int d = static_cast<int>(center.size());
    return DomainSpec(d, {BallSet{std::move(center), radius}});
}

DomainSpec DomainSpec::unit_ball(int dim) { return ball(Point(dim, 0.0), 1.0); }

DomainSpec DomainSpec::polydisc(Point center, std::vector<double> radii) {
    const int d = static_cast<int>(center.size());
    return DomainSpec(d, {PolydiscSet{std::move(center), std::move(radii)}});
}

DomainSpec DomainSpec::unit_polydisc(int dim) { return polydisc(Point(dim, 0.0), std::vector<double>(dim, 1.0)); }

double DomainSpec::clearance(std::span<const cplx> z) const {
    double g = kInf;
    for (const auto& c : components_) {
        double v;
        if (auto* b = std::get_if<BallSet>(&c)) v = ball_gap(*b, z);
        else if (auto* p = std::get_if<PolydiscSet>(&c)) v = polydisc_gap(*p, z);
        else v = halfspace_gap(std::get<HalfspaceSet>(c), z);
        g = std::min(g, v);
    }
    return g;
}

double DomainSpec::boundary_clearance(const BoundarySamples& s) const {
    double worst = -kInf;
    Point z(s.dim);
    for (int j = 0; j < s.n; ++j) {
        s.point(j, z);
        worst = std::max(worst, clearance(z));
    }
    return worst;
}

double DomainSpec::bounding_radius() const {
    double r = 0.0;
    for (const auto& c : components_) {
        if (auto* b = std::get_if<BallSet>(&c)) {
            double s = 0.0;
            for (auto v : b->center) s += std::norm(v);
            r = std::max(r, std::sqrt(s) + b->radius);
        } else if (auto* p = std::get_if<PolydiscSet>(&c)) {
            double s = 0.0;
            for (size_t k = 0; k < p->center.size(); ++k) s += std::pow(std::abs(p->center[k]) + p->radii[k], 2);
            r = std::max(r, std::sqrt(s));
        } else {
            return kInf;
        }
    }
    return r;
}

Point DomainSpec::interior_point() const {
    if (components_.empty()) throw ValidationError("domain", "empty domain");
    const auto& c = components_.front();
    if (auto* b = std::get_if<BallSet>(&c)) return b->center;
    if (auto* p = std::get_if<PolydiscSet>(&c)) return p->center;
    const auto& h = std::get<HalfspaceSet>(c);
    std::vector<double> x(2 * dim_, 0.0);
    for (int sweep = 0; sweep < 1000; ++sweep) {
        bool ok = true;
        for (size_t i = 0; i < h.a.size(); ++i) {
            double dot = 0.0, nrm = 0.0;
            for (size_t k = 0; k < x.size(); ++k) {
                dot += h.a[i][k] * x[k];
                nrm += h.a[i][k] * h.a[i][k];
            }
            const double target = h.b[i] - 1e-3 * std::sqrt(nrm);
            if (dot > target) {
                ok = false;
                for (size_t k = 0; k < x.size(); ++k) x[k] -= (dot - target) / nrm * h.a[i][k];
            }
        }
        if (ok) break;
    }
    Point z(dim_);
    for (int k = 0; k < dim_; ++k) z[k] = {x[2 * k], x[2 * k + 1]};
    if (!contains(z)) throw ValidationError("halfspaces", "half-space system appears empty");
    return z;
}

} // namespace discenv
