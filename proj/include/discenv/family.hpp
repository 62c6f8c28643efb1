#pragma once

#include <span>
#include <string>
#include <vector>

#include "discenv/disc.hpp"
#include "discenv/domain.hpp"
#include "discenv/optimizer.hpp"

namespace discenv {

enum class FamilyKind {
    /// f = x + s(x) zeta q(zeta) / prod_j (zeta - a_j), s(x) = 1 + |x|.
    /// A pole parameter with |a_j| >= 1 has no root in the disc (deactivated).
    Good,
    /// f = x + s(x) zeta q(zeta): polynomial discs into C^n.
    Affine,
    /// One variable: f = c + R (w + b) / (1 + conj(b) w), w = zeta h(zeta),
    /// b = (x - c) / R. Maps into the disc D(c, R) exactly when |w| < 1 on the
    /// circle, i.e. the Schur class.
    DiscDomain,
};

const char* family_kind_name(FamilyKind k) noexcept;
FamilyKind family_kind_from_name(const std::string& s);

/// Parameterized disc family with a center map: build(x, theta)(0) = x.
struct DiscFamily {
    FamilyKind kind = FamilyKind::Affine;
    int dim = 1;
    int degree = 1;      ///< lift degree bound for the numerator part
    int pole_budget = 0; ///< Good families only
    double coef_bound = 2.0;
    cplx disc_center{};  ///< DiscDomain only
    double disc_radius = 1.0;
    std::vector<Bounds> box;

    int param_dim() const noexcept { return static_cast<int>(box.size()); }
    bool contains_constants() const noexcept { return true; }
    ProjectiveDisc build(const Point& x, std::span<const double> theta) const;
    /// Parameters of the constant disc (any center).
    std::vector<double> constant_params() const;
    /// Family-specific extra starts tried right after the constant disc
    /// (DiscDomain: the Moebius disc through the center, slightly shrunk).
    std::vector<std::vector<double>> canonical_starts() const;
    /// Number of coordinates' free polynomial coefficients (complex).
    int coeffs_per_coord() const noexcept;
};

/// Range of a deactivated pole parameter (real and imaginary part).
inline constexpr double kPoleBox = 1.5;

DiscFamily make_affine_family(int dim, int degree, double coef_bound = 2.0);
/// Good family w.r.t. Omega: lift degree <= max(degree, pole_budget) with at
/// most pole_budget poles in the disc. Throws for an empty Omega.
DiscFamily make_good_family(const DomainSpec& omega, int degree, int pole_budget, double coef_bound = 2.0);
DiscFamily make_disc_domain_family(cplx center, double radius, int degree);

} // namespace discenv
