#pragma once

#include <optional>
#include <vector>

#include "discenv/json_io.hpp"
#include "discenv/roots.hpp"
#include "discenv/winding.hpp"

namespace discenv {

/// Closed arc {e^{it} : t0 <= t <= t1} of the unit circle (radians).
struct Arc {
    double t0 = 0.0, t1 = 0.0;
};

/// Finite union of pairwise disjoint closed arcs.
struct ArcSet {
    std::vector<Arc> arcs;

    ArcSet() = default;
    /// Validates positive lengths below 2 pi and pairwise disjointness.
    explicit ArcSet(std::vector<Arc> a);
    /// Total length / 2 pi.
    double normalized_length() const;
};

/// {r_min < |z| < r_max, arg z in (t0, t1)}; the full annulus when t1 - t0 >= 2 pi.
struct AnnularSector {
    double r_min = 0.0, r_max = 1.0;
    double t0 = 0.0, t1 = 0.0;

    bool full() const noexcept;
    bool contains(cplx z) const;
};

/// Sectors over each arc of J, widened by `widen` radians, with radii (r_min, 1).
std::vector<AnnularSector> arc_neighborhood(const ArcSet& j, double r_min, double widen);

/// Roots of z^k - zeta(z) in the union U of sectors (|z| <= 1), cross-checked
/// against the winding number of z^k - zeta(z) along each sector boundary.
/// Requires 1 <= k <= 512 and 0 < |zeta| < 1 on sampled points of U.
/// Throws NumericError when the two counts disagree.
RootSet solve_zk(const ComplexPoly& zeta, int k, const std::vector<AnnularSector>& u);

/// Root count of z^k - zeta(z) in U by the argument principle alone (any k).
int count_zk_winding(const ComplexPoly& zeta, int k, const std::vector<AnnularSector>& u);

struct Lemma1Report {
    int k = 0;
    RootSet solutions;
    int winding = 0;
    double lhs = 0.0;       ///< sum of log|z| over the solutions
    double integral = 0.0;  ///< (1/2pi) int_J log|zeta(e^{it})| dt
    double eps = 0.0;
    double rhs = 0.0;       ///< integral + eps
    bool holds = false;     ///< lhs < rhs

    Json to_json() const;
};

Lemma1Report lemma1_check(const ComplexPoly& zeta, const ArcSet& j, const std::vector<AnnularSector>& u, int k,
                          double eps);

/// Smallest k of the increasing range from which the estimate holds for every
/// later k of the range; nullopt when the last k fails.
std::optional<int> k_threshold_scan(const ComplexPoly& zeta, const ArcSet& j, const std::vector<AnnularSector>& u,
                                    double eps, const std::vector<int>& k_range, int threads = 0);

} // namespace discenv
