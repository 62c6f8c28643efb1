#include "discenv/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "discenv/error.hpp"

namespace discenv {
namespace {

double log_plus(double r) { return r > 1.0 ? std::log(r) : 0.0; }

double norm2(const Point& z) {
    double s = 0.0;
    for (auto v : z) s += std::norm(v);
    return std::sqrt(s);
}

DiscFunctional psi_functional(const CurveModel& model, const Point& x) {
    DiscFunctional h;
    h.name = "psi";
    h.core = [model, x](const ProjectiveDisc& hd, const BoundarySamples&) {
        if (hd.is_constant()) return 0.0;
        const ProjectiveDisc f = pushforward(model, hd);
        const Divisor d = infinity_divisor(f);
        if (d.empty()) return 0.0;
        std::vector<double> w;
        for (const auto& p : d.points) w.push_back(p.mult);
        // zeta = 0 is a preimage of x; other preimages can only lower the value.
        double best = -green_sum(d, w, 0.0);
        for (const auto& z : preimages(f, x, 1e-7).points) best = std::min(best, -green_sum(d, w, z.z));
        return best;
    };
    h.lower_bound = 0.0;
    return h;
}

// Good-family parameters of x + zeta c / (zeta - a): the one-pole disc along
// the line from the center y0 of a ball B(y0, rho) inside omega through x,
// with boundary on the sphere |z - y0| = rho.
std::optional<std::vector<double>> line_disc_start(const DiscFamily& fam, const DomainSpec& omega, const Point& x) {
    if (fam.kind != FamilyKind::Good || fam.pole_budget < 1 || fam.dim != omega.dim()) return std::nullopt;
    const Point y0 = omega.interior_point();
    const double rho = -0.9 * omega.clearance(y0);
    if (!(rho > 0.0) || !std::isfinite(rho)) return std::nullopt;
    Point y(x.size());
    for (size_t k = 0; k < x.size(); ++k) y[k] = x[k] - y0[k];
    const double ny = norm2(y);
    if (!(ny > rho)) return std::nullopt;
    const double a = rho / ny, s = 1.0 + norm2(x);
    std::vector<double> p = fam.constant_params();
    p[0] = a;
    p[1] = 0.0;
    const int m = fam.pole_budget, cpc = fam.coeffs_per_coord();
    for (int k = 0; k < fam.dim; ++k) {
        const cplx c = -rho * (y[k] / ny) * (1.0 - a * a) / a / s;
        if (std::abs(c.real()) > fam.coef_bound || std::abs(c.imag()) > fam.coef_bound) return std::nullopt;
        p[2 * m + 2 * k * cpc] = c.real();
        p[2 * m + 2 * k * cpc + 1] = c.imag();
    }
    return p;
}

} // namespace

Json GrowthReport::to_json() const {
    return {{"constant", constant}, {"bounded", bounded}, {"shell_sups", shell_sups}};
}

GrowthReport lelong_class_probe(const PointField& v, int dim, const std::vector<double>& radii, int samples) {
    if (radii.size() < 2) throw ValidationError("radii", "need at least two radii");
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] >= 2.0)) throw ValidationError("radii", "radii must be at least 2");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw ValidationError("radii", "radii must be increasing");
    }
    GrowthReport rep;
    for (double r : radii) {
        double sup = kNegInf;
        for (int j = 0; j < samples; ++j) {
            Point z = unit_direction(dim, 31, j);
            for (auto& c : z) c *= r;
            sup = std::max(sup, v(z) - std::log(r));
        }
        rep.shell_sups.push_back(sup);
    }
    const double a = rep.shell_sups[rep.shell_sups.size() - 2], b = rep.shell_sups.back();
    rep.constant = b;
    rep.bounded = std::isfinite(b) && std::abs(b - a) < 0.1;
    return rep;
}

EnvelopeResult lempert_V(const DomainSpec& omega, const Point& z, const DiscFamily& family, EnvelopeOptions opts) {
    if (!omega.convex()) throw ValidationError("domain", "the Lempert formula requires a convex domain");
    return ebj_field(omega, z, family, std::move(opts));
}

EnvelopeResult ebj_field(const DomainSpec& omega, const Point& z, const DiscFamily& family, EnvelopeOptions opts) {
    if (omega.dim() != family.dim) throw ValidationError("domain", "dimension mismatch with family");
    opts.boundary_domain = omega;
    if (auto p = line_disc_start(family, omega, z)) opts.warm_starts.push_back(std::move(*p));
    return envelope(j_disc_functional(), family, z, opts);
}

std::unique_ptr<MemoField> make_ebj_memo(const DomainSpec& omega, const DiscFamily& family, const EnvelopeOptions& opts,
                                         double resolution, int threads) {
    return std::make_unique<MemoField>(
        family.dim, [omega, family, opts](const Point& z) { return ebj_field(omega, z, family, opts).value; },
        resolution, threads);
}

TwoStageResult siciak_V(MemoField& ebj, const DiscFamily& outer_family, const Point& z, const EnvelopeOptions& outer) {
    if (outer_family.kind != FamilyKind::Affine) throw ValidationError("outer_family", "outer discs must be affine");
    return two_stage_envelope(ebj, outer_family, z, outer);
}

bool is_closed_form_name(const std::string& name) {
    return name == "disc" || name == "ball" || name == "polydisc" || name == "cusp-model";
}

double closed_form_V(const std::string& name, const Point& z, double radius) {
    if (z.empty()) throw ValidationError("point", "empty point");
    if (name == "disc") {
        if (z.size() != 1) throw ValidationError("point", "disc is a domain in C");
        if (!(radius > 0.0)) throw ValidationError("radius", "must be positive");
        return log_plus(std::abs(z[0]) / radius);
    }
    if (name == "ball") return log_plus(norm2(z));
    if (name == "polydisc") {
        double m = 0.0;
        for (auto v : z) m = std::max(m, log_plus(std::abs(v)));
        return m;
    }
    if (name == "cusp-model") {
        const CurveModel c = cusp_model();
        const auto ts = normalize_point(c, z, 1e-7);
        return c.degree_at_infinity * log_plus(std::abs(ts.front()));
    }
    throw ValidationError("name", "unknown closed form '" + name + "'");
}

EnvelopeResult psi_field(const CurveModel& model, const DomainSpec& omega_param, const Point& x,
                         const DiscFamily& family, const EnvelopeOptions& opts) {
    if (family.dim != 1 || omega_param.dim() != 1) throw ValidationError("family", "parameter discs are one dimensional");
    const auto ts = normalize_point(model, x, 1e-7);
    EnvelopeOptions o = opts;
    o.boundary_domain = omega_param;
    const DiscFunctional h = psi_functional(model, x);
    EnvelopeResult best;
    for (cplx t : ts) {
        auto r = envelope(h, family, {t}, o);
        if (best.best_params.empty() || r.value < best.value) best = std::move(r);
    }
    return best;
}

std::unique_ptr<MemoField> make_psi_memo(const CurveModel& model, const DomainSpec& omega_param,
                                         const DiscFamily& family, const EnvelopeOptions& opts, double resolution,
                                         int threads) {
    return std::make_unique<MemoField>(
        1,
        [model, omega_param, family, opts](const Point& t) {
            return psi_field(model, omega_param, model.eval(t[0]), family, opts).value;
        },
        resolution, threads);
}

TwoStageResult siciak_V_variety(const CurveModel& model, MemoField& psi, const Point& x,
                                const DiscFamily& outer_family, const EnvelopeOptions& outer) {
    if (outer_family.kind != FamilyKind::Affine || outer_family.dim != 1)
        throw ValidationError("outer_family", "outer discs must be affine parameter-plane discs");
    // P_{Psi o map}(g) over g centered at t equals P_{Psi}(map o g).
    TwoStageResult best;
    bool first = true;
    for (cplx t : normalize_point(model, x, 1e-7)) {
        auto r = two_stage_envelope(psi, outer_family, {t}, outer);
        if (first || r.outer.value < best.outer.value) best = std::move(r);
        first = false;
    }
    return best;
}

} // namespace discenv
