#include "discenv/lemma1.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "discenv/error.hpp"
#include "discenv/parallel.hpp"
#include "discenv/quadrature.hpp"

namespace discenv {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr int kMaxK = 512;

// Angle of t relative to t0, in [0, 2 pi).
double rel_angle(double t, double t0) {
    double d = std::fmod(t - t0, kTwoPi);
    if (d < 0) d += kTwoPi;
    return d;
}

ComplexPoly zk_poly(const ComplexPoly& zeta, int k) { return ComplexPoly::monomial(1.0, k) - zeta; }

void validate_region(const std::vector<AnnularSector>& u) {
    if (u.empty()) throw ValidationError("U", "region needs at least one sector");
    for (const auto& s : u) {
        if (!(s.r_min >= 0.0 && s.r_min < s.r_max && s.r_max <= 1.0))
            throw ValidationError("U", "sector radii must satisfy 0 <= r_min < r_max <= 1");
        if (!s.full() && !(s.t1 > s.t0)) throw ValidationError("U", "sector angles must satisfy t0 < t1");
    }
}

int sector_winding(const std::function<cplx(cplx)>& h, const AnnularSector& s, int degree) {
    // z^k turns k times per circle; resolve that before adaptive refinement.
    const int n = std::max(256, 16 * degree);
    if (s.full()) {
        int w = winding_count(h, Contour::circle(0.0, s.r_max), n);
        if (s.r_min > 0.0) w -= winding_count(h, Contour::circle(0.0, s.r_min), n);
        return w;
    }
    if (s.r_min > 0.0) return winding_count(h, Contour::annular_sector(s.r_min, s.r_max, s.t0, s.t1), 2 * n);
    // Sector with apex at the origin.
    const double arc = s.t1 - s.t0;
    const Contour c{[=](double q) {
        const double p = 3.0 * q;
        if (p < 1.0) return std::polar(s.r_max, s.t0 + p * arc);
        if (p < 2.0) return std::polar(s.r_max * (2.0 - p), s.t1);
        return std::polar(s.r_max * (p - 2.0), s.t0);
    }};
    return winding_count(h, c, 2 * n);
}

} // namespace

ArcSet::ArcSet(std::vector<Arc> a) : arcs(std::move(a)) {
    for (size_t i = 0; i < arcs.size(); ++i) {
        const double len = arcs[i].t1 - arcs[i].t0;
        if (!(len > 0.0) || !(len < kTwoPi)) throw ValidationError("J", "arcs need positive length below 2 pi");
        for (size_t j = 0; j < i; ++j) {
            const double a = rel_angle(arcs[i].t0, arcs[j].t0), b = rel_angle(arcs[j].t0, arcs[i].t0);
            if (a <= arcs[j].t1 - arcs[j].t0 || b <= len) throw ValidationError("J", "arcs must be pairwise disjoint");
        }
    }
}

double ArcSet::normalized_length() const {
    double s = 0.0;
    for (const auto& a : arcs) s += a.t1 - a.t0;
    return s / kTwoPi;
}

bool AnnularSector::full() const noexcept { return t1 - t0 >= kTwoPi; }

bool AnnularSector::contains(cplx z) const {
    const double r = std::abs(z);
    if (!(r > r_min && r < r_max)) return false;
    if (full()) return true;
    const double d = rel_angle(std::arg(z), t0);
    return d > 0.0 && d < t1 - t0;
}

std::vector<AnnularSector> arc_neighborhood(const ArcSet& j, double r_min, double widen) {
    std::vector<AnnularSector> u;
    for (const auto& a : j.arcs) u.push_back({r_min, 1.0, a.t0 - widen, a.t1 + widen});
    return u;
}

int count_zk_winding(const ComplexPoly& zeta, int k, const std::vector<AnnularSector>& u) {
    if (k < 1) throw ValidationError("k", "k must be positive");
    validate_region(u);
    const ComplexPoly p = zk_poly(zeta, k);
    const std::function<cplx(cplx)> h = [&p](cplx z) { return p(z); };
    int w = 0;
    for (const auto& s : u) w += sector_winding(h, s, p.degree());
    return w;
}

RootSet solve_zk(const ComplexPoly& zeta, int k, const std::vector<AnnularSector>& u) {
    if (k < 1 || k > kMaxK) throw ValidationError("k", "root locations require 1 <= k <= 512");
    validate_region(u);
    for (const auto& s : u) {
        for (int i = 0; i <= 16; ++i) {
            const double r = s.r_min + (std::min(s.r_max, 1.0) - s.r_min) * i / 16.0;
            for (int j = 0; j <= 64; ++j) {
                const double t = s.full() ? kTwoPi * j / 64.0 : s.t0 + (s.t1 - s.t0) * j / 64.0;
                const double a = std::abs(zeta(std::polar(r, t)));
                if (!(a > 0.0 && a < 1.0)) throw ValidationError("zeta", "|zeta| must lie in (0, 1) on the region");
            }
        }
    }
    const ComplexPoly p = zk_poly(zeta, k);
    RootSet all = poly_roots(p), in;
    for (const auto& r : all.roots)
        if (std::any_of(u.begin(), u.end(), [&](const AnnularSector& s) { return s.contains(r.location); }))
            in.roots.push_back(r);
    const int w = count_zk_winding(zeta, k, u);
    if (w != in.total_multiplicity())
        throw NumericError("root count " + std::to_string(in.total_multiplicity()) + " disagrees with winding count " +
                           std::to_string(w));
    return in;
}

Json Lemma1Report::to_json() const {
    Json sol = Json::array();
    for (const auto& r : solutions.roots) sol.push_back({{"z", discenv::to_json(r.location)}, {"mult", r.multiplicity}});
    return {{"k", k},           {"count", solutions.total_multiplicity()},
            {"winding", winding}, {"solutions", sol},
            {"lhs", lhs},       {"integral", integral},
            {"eps", eps},       {"rhs", rhs},
            {"holds", holds}};
}

Lemma1Report lemma1_check(const ComplexPoly& zeta, const ArcSet& j, const std::vector<AnnularSector>& u, int k,
                          double eps) {
    if (j.arcs.empty()) throw ValidationError("J", "need at least one arc");
    for (const auto& a : j.arcs) {
        const bool covered = std::any_of(u.begin(), u.end(), [&](const AnnularSector& s) {
            return s.full() || (rel_angle(a.t0, s.t0) + (a.t1 - a.t0) <= s.t1 - s.t0 + 1e-12);
        });
        if (!covered) throw ValidationError("U", "U must contain every arc of J");
    }
    Lemma1Report rep;
    rep.k = k;
    rep.eps = eps;
    rep.solutions = solve_zk(zeta, k, u);
    rep.winding = rep.solutions.total_multiplicity();
    for (const auto& r : rep.solutions.roots) rep.lhs += r.multiplicity * std::log(std::abs(r.location));
    for (const auto& a : j.arcs)
        rep.integral += arc_integral([&](cplx z) { return std::log(std::abs(zeta(z))); }, a.t0, a.t1);
    rep.rhs = rep.integral + eps;
    rep.holds = rep.lhs < rep.rhs;
    return rep;
}

std::optional<int> k_threshold_scan(const ComplexPoly& zeta, const ArcSet& j, const std::vector<AnnularSector>& u,
                                    double eps, const std::vector<int>& k_range, int threads) {
    if (k_range.empty()) throw ValidationError("k_range", "empty range");
    for (size_t i = 1; i < k_range.size(); ++i)
        if (!(k_range[i] > k_range[i - 1])) throw ValidationError("k_range", "must be increasing");
    const auto holds = parallel_map<int>(k_range.size(), threads, [&](std::size_t i) {
        return lemma1_check(zeta, j, u, k_range[i], eps).holds ? 1 : 0;
    });
    if (!holds.back()) return std::nullopt;
    std::size_t i = k_range.size() - 1;
    while (i > 0 && holds[i - 1]) --i;
    return k_range[i];
}

} // namespace discenv
