#include "discenv/functionals.hpp"

#include <cmath>
#include <numbers>

#include "discenv/error.hpp"
#include "discenv/kernels.hpp"

namespace discenv {
namespace {

bool same_point(std::span<const cplx> a, std::span<const cplx> b, double tol) {
    for (size_t k = 0; k < a.size(); ++k)
        if (std::abs(a[k] - b[k]) > tol) return false;
    return true;
}

double point_scale(std::span<const cplx> p) {
    double m = 1.0;
    for (auto v : p) m = std::max(m, std::abs(v));
    return m;
}

double samples_mean(const ScalarField& u, const BoundarySamples& s, int& neg_inf_hits) {
    if (s.f0_clearance < kBoundaryClearance) throw NumericError("disc boundary meets the hyperplane at infinity");
    const int n = s.n;
    std::vector<double> vals(static_cast<size_t>(n));
    neg_inf_hits = 0;
    if (u.prefetch) {
        std::vector<Point> pts(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) s.point(j, pts[j]);
        u.prefetch(pts);
        for (int j = 0; j < n; ++j) {
            vals[j] = u(pts[j]);
            if (vals[j] == kNegInf) ++neg_inf_hits;
        }
    } else {
        Point z(s.dim);
        for (int j = 0; j < n; ++j) {
            s.point(j, z);
            vals[j] = u(z);
            if (vals[j] == kNegInf) ++neg_inf_hits;
        }
    }
    if (neg_inf_hits > 0) return kNegInf;
    return simd::sum(vals) / n;
}

} // namespace

ScalarField constant_field(int dim, double c) {
    return {dim, [c](std::span<const cplx>) { return c; }, true, "constant"};
}

ScalarField negated(const ScalarField& u) {
    auto e = u.eval;
    ScalarField r{u.dim, [e](std::span<const cplx> z) { return -e(z); }, false, "-" + u.name, u.prefetch};
    return r;
}

WeightField::WeightField(std::vector<WeightPoint> s) : support(std::move(s)) {
    for (size_t i = 0; i < support.size(); ++i) {
        if (!(support[i].weight > 0.0) || !std::isfinite(support[i].weight))
            throw ValidationError("alpha", "weights must be positive and finite");
        if (support[i].y.empty() || support[i].y.size() != support[0].y.size())
            throw ValidationError("alpha", "support points must share one dimension");
        for (size_t j = 0; j < i; ++j)
            if (support[i].y == support[j].y) throw ValidationError("alpha", "support points must be distinct");
    }
}

double WeightField::operator()(std::span<const cplx> z) const {
    for (const auto& p : support)
        if (p.y.size() == z.size() && std::equal(z.begin(), z.end(), p.y.begin())) return p.weight;
    return 0.0;
}

double poisson(const ScalarField& u, const ProjectiveDisc& f, const BoundarySamples& s) {
    if (s.n < 8) throw ValidationError("n", "need at least 8 boundary samples");
    int hits = 0;
    const double m = samples_mean(u, s, hits);
    if (hits != 1) return m;
    // Isolated -inf sample: one refinement on a doubled, shifted grid.
    return samples_mean(u, sample_boundary(f, *circle_grid(2 * s.n, std::numbers::pi)), hits);
}

double poisson(const ScalarField& u, const ProjectiveDisc& f, int n) {
    if (n < 8) throw ValidationError("n", "need at least 8 boundary samples");
    return poisson(u, f, sample_boundary(f, *circle_grid(n)));
}

double riesz(const ScalarField& u, const ProjectiveDisc& f, int n) {
    const double c = u(f.center());
    if (c == kNegInf) return kNegInf;
    return c - poisson(u, f, n);
}

void lelong_divisor(const WeightField& alpha, const ProjectiveDisc& f, bool reduced, Divisor& d,
                    std::vector<double>& weights) {
    d.points.clear();
    weights.clear();
    if (alpha.empty()) return;
    const bool constant = f.is_constant();
    const Point c = f.center();
    for (const auto& s : alpha.support) {
        if (static_cast<int>(s.y.size()) != f.dim()) throw ValidationError("alpha", "dimension mismatch with disc");
        if (same_point(c, s.y, 1e-12 * point_scale(s.y))) {
            d.points.push_back({0.0, 1});
            weights.push_back(s.weight);
            continue;
        }
        if (constant) continue;
        for (const auto& p : preimages(f, s.y).points) {
            d.points.push_back(p);
            weights.push_back(s.weight * (reduced ? 1 : p.mult));
        }
    }
}

double lelong(const WeightField& alpha, const ProjectiveDisc& f, bool reduced) {
    Divisor d;
    std::vector<double> w;
    lelong_divisor(alpha, f, reduced, d, w);
    double s = 0.0;
    for (size_t i = 0; i < d.points.size(); ++i) {
        if (d.points[i].z == cplx{}) return kNegInf;
        s += w[i] * std::log(std::abs(d.points[i].z));
    }
    return s;
}

double k_functional(const WeightField& alpha, const ProjectiveDisc& f) {
    Divisor d;
    std::vector<double> w;
    lelong_divisor(alpha, f, true, d, w);
    double m = 0.0;
    for (size_t i = 0; i < d.points.size(); ++i) {
        if (d.points[i].z == cplx{}) return kNegInf;
        m = std::min(m, w[i] * std::log(std::abs(d.points[i].z)));
    }
    return m;
}

double j_functional(const ProjectiveDisc& f) {
    const auto d = infinity_divisor(f);
    double s = 0.0;
    for (const auto& p : d.points) {
        const double r = std::abs(p.z);
        if (r < 1e-12) return kPosInf;
        s -= p.mult * std::log(r);
    }
    return s;
}

double green_sum(const Divisor& d, std::span<const double> weights, cplx zeta) {
    if (weights.size() != d.points.size()) throw ValidationError("weights", "one weight per divisor point");
    double s = 0.0;
    for (size_t i = 0; i < d.points.size(); ++i) {
        if (weights[i] == 0.0) continue;
        const cplx a = d.points[i].z;
        const double r = std::abs((zeta - a) / (1.0 - std::conj(a) * zeta));
        if (r == 0.0) return kNegInf;
        s += weights[i] * std::log(r);
    }
    return s;
}

void green_sum(const Divisor& d, std::span<const double> weights, std::span<const double> zr,
               std::span<const double> zi, std::span<double> out) {
    if (weights.size() != d.points.size()) throw ValidationError("weights", "one weight per divisor point");
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> acc(zr.size());
    for (size_t i = 0; i < d.points.size(); ++i) {
        if (weights[i] == 0.0) continue;
        std::fill(acc.begin(), acc.end(), 1.0);
        simd::blaschke_abs2_accumulate(d.points[i].z, zr, zi, acc);
        for (size_t j = 0; j < acc.size(); ++j) out[j] += acc[j] == 0.0 ? kNegInf : 0.5 * weights[i] * std::log(acc[j]);
    }
}

} // namespace discenv
