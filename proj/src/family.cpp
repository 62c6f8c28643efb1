#include "discenv/family.hpp"

#include <cmath>

#include "discenv/error.hpp"

namespace discenv {
namespace {

double center_scale(const Point& x) {
    double s = 0.0;
    for (auto v : x) s += std::norm(v);
    return 1.0 + std::sqrt(s);
}

// zeta * q(zeta) with q's coefficients read from theta as (re, im) pairs.
ComplexPoly shifted_numerator(std::span<const double> theta, int count, double scale) {
    std::vector<cplx> c(static_cast<size_t>(count) + 1);
    for (int j = 0; j < count; ++j) c[j + 1] = scale * cplx(theta[2 * j], theta[2 * j + 1]);
    return ComplexPoly(std::move(c));
}

} // namespace

const char* family_kind_name(FamilyKind k) noexcept {
    switch (k) {
    case FamilyKind::Good: return "good";
    case FamilyKind::Affine: return "affine";
    case FamilyKind::DiscDomain: return "disc-domain";
    }
    return "?";
}

FamilyKind family_kind_from_name(const std::string& s) {
    if (s == "good") return FamilyKind::Good;
    if (s == "affine") return FamilyKind::Affine;
    if (s == "disc-domain") return FamilyKind::DiscDomain;
    throw ValidationError("kind", "unknown family kind '" + s + "'");
}

int DiscFamily::coeffs_per_coord() const noexcept { return kind == FamilyKind::DiscDomain ? degree + 1 : degree; }

ProjectiveDisc DiscFamily::build(const Point& x, std::span<const double> theta) const {
    if (static_cast<int>(x.size()) != dim) throw ValidationError("center", "dimension mismatch");
    if (static_cast<int>(theta.size()) != param_dim()) throw ValidationError("params", "dimension mismatch");
    switch (kind) {
    case FamilyKind::Affine:
    case FamilyKind::Good: {
        const int m = kind == FamilyKind::Good ? pole_budget : 0;
        ComplexPoly f0 = ComplexPoly::constant(1.0);
        for (int j = 0; j < m; ++j) {
            cplx a(theta[2 * j], theta[2 * j + 1]);
            if (std::abs(a) < 1e-9) a = 1e-9;
            f0 = f0 * ComplexPoly({-a, 1.0});
        }
        const double s = center_scale(x);
        std::vector<ComplexPoly> lift{f0};
        const int cpc = coeffs_per_coord();
        for (int k = 0; k < dim; ++k) {
            auto num = shifted_numerator(theta.subspan(2 * m + 2 * k * cpc, 2 * cpc), cpc, s);
            lift.push_back(f0 * x[k] + num);
        }
        return ProjectiveDisc(std::move(lift));
    }
    case FamilyKind::DiscDomain: {
        const cplx b = (x[0] - disc_center) / disc_radius;
        if (!(std::abs(b) < 1.0)) throw ValidationError("center", "center outside the disc domain");
        const ComplexPoly w = shifted_numerator(theta, degree + 1, 1.0);
        ComplexPoly f0 = w * std::conj(b) + ComplexPoly::constant(1.0);
        ComplexPoly f1 = f0 * disc_center + (w + ComplexPoly::constant(b)) * disc_radius;
        return ProjectiveDisc({std::move(f0), std::move(f1)});
    }
    }
    throw ValidationError("kind", "unknown family kind");
}

std::vector<double> DiscFamily::constant_params() const {
    std::vector<double> p(box.size(), 0.0);
    if (kind == FamilyKind::Good)
        for (int j = 0; j < pole_budget; ++j) p[2 * j] = kPoleBox;
    return p;
}

std::vector<std::vector<double>> DiscFamily::canonical_starts() const {
    if (kind != FamilyKind::DiscDomain) return {};
    auto p = constant_params();
    p[0] = 1.0 - 1e-3;
    return {p};
}

DiscFamily make_affine_family(int dim, int degree, double coef_bound) {
    if (dim < 1) throw ValidationError("dim", "dimension must be positive");
    if (degree < 1) throw ValidationError("degree", "degree must be at least 1");
    if (!(coef_bound > 0.0)) throw ValidationError("coef_bound", "must be positive");
    DiscFamily f;
    f.kind = FamilyKind::Affine;
    f.dim = dim;
    f.degree = degree;
    f.coef_bound = coef_bound;
    f.box.assign(static_cast<size_t>(2 * dim * degree), Bounds{-coef_bound, coef_bound});
    return f;
}

DiscFamily make_good_family(const DomainSpec& omega, int degree, int pole_budget, double coef_bound) {
    if (omega.empty()) throw ValidationError("omega", "domain is empty");
    if (degree < 1) throw ValidationError("degree", "degree must be at least 1");
    if (pole_budget < 1) throw ValidationError("pole_budget", "pole budget must be at least 1");
    if (!(coef_bound > 0.0)) throw ValidationError("coef_bound", "must be positive");
    DiscFamily f;
    f.kind = FamilyKind::Good;
    f.dim = omega.dim();
    f.degree = degree;
    f.pole_budget = pole_budget;
    f.coef_bound = coef_bound;
    f.box.assign(static_cast<size_t>(2 * pole_budget), Bounds{-kPoleBox, kPoleBox});
    f.box.insert(f.box.end(), static_cast<size_t>(2 * f.dim * degree), Bounds{-coef_bound, coef_bound});
    return f;
}

DiscFamily make_disc_domain_family(cplx center, double radius, int degree) {
    if (!(radius > 0.0)) throw ValidationError("radius", "must be positive");
    if (degree < 0) throw ValidationError("degree", "must be nonnegative");
    DiscFamily f;
    f.kind = FamilyKind::DiscDomain;
    f.dim = 1;
    f.degree = degree;
    f.disc_center = center;
    f.disc_radius = radius;
    f.coef_bound = 1.0;
    f.box.assign(static_cast<size_t>(2 * (degree + 1)), Bounds{-1.0, 1.0});
    return f;
}

} // namespace discenv
