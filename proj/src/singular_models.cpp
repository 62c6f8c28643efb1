#include "discenv/singular_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "discenv/error.hpp"
#include "discenv/optimizer.hpp"
#include "discenv/parallel.hpp"
#include "discenv/roots.hpp"

namespace discenv {
namespace {

// Backward-error scale of evaluating p(t) - x.
double residual_scale(const ComplexPoly& p, cplx t, cplx x) {
    double s = std::abs(x), tp = 1.0;
    for (const auto& c : p.coeffs()) {
        s += std::abs(c) * tp;
        tp *= std::abs(t);
    }
    return s;
}

ComplexPoly compose(const ComplexPoly& outer, const ComplexPoly& inner) {
    const auto& c = outer.coeffs();
    ComplexPoly r = ComplexPoly::constant(c.back());
    for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) r = r * inner + ComplexPoly::constant(c[k]);
    return r;
}

Json cplx_pair(cplx z) { return to_json(z); }

Json checks_json(const std::vector<PointCheck>& v) {
    Json a = Json::array();
    for (const auto& c : v)
        a.push_back({{"t", to_json(c.t)},
                     {"value", extended_to_json(c.value)},
                     {"expected", extended_to_json(c.expected)},
                     {"ok", c.ok}});
    return a;
}

} // namespace

Point CurveModel::eval(cplx t) const {
    Point x(map.size());
    for (size_t k = 0; k < map.size(); ++k) x[k] = map[k](t);
    return x;
}

Json CurveModel::to_json() const {
    Json maps = Json::array();
    for (const auto& p : map) maps.push_back(poly_to_json(p));
    Json sing = Json::array();
    for (size_t i = 0; i < singular_points.size(); ++i) {
        Json pre = Json::array();
        for (auto t : singular_preimages[i]) pre.push_back(cplx_pair(t));
        sing.push_back({{"point", point_to_json(singular_points[i])}, {"preimages", pre}});
    }
    return {{"name", name},
            {"map", maps},
            {"param_radius", extended_to_json(param_radius)},
            {"singular_points", sing},
            {"degree_at_infinity", degree_at_infinity},
            {"locally_irreducible", locally_irreducible}};
}

CurveModel nodal_model() {
    CurveModel m;
    m.name = "nodal";
    m.map = {ComplexPoly({0.0, 0.0, 0.0, 1.0}), ComplexPoly({0.0, 1.0, 1.0})};
    m.param_radius = 3.0;
    const cplx w1 = std::polar(1.0, 2 * std::numbers::pi / 3), w2 = std::conj(w1);
    m.singular_points = {{1.0, -1.0}};
    m.singular_preimages = {{w1, w2}};
    m.degree_at_infinity = 3;
    m.locally_irreducible = false;
    return m;
}

CurveModel cusp_model() {
    CurveModel m;
    m.name = "cusp";
    m.map = {ComplexPoly({0.0, 0.0, 1.0}), ComplexPoly({0.0, 0.0, 0.0, 1.0})};
    m.param_radius = kPosInf;
    m.singular_points = {{0.0, 0.0}};
    m.singular_preimages = {{0.0}};
    m.degree_at_infinity = 3;
    m.locally_irreducible = true;
    return m;
}

CurveModel curve_model(const std::string& name) {
    if (name == "nodal") return nodal_model();
    if (name == "cusp") return cusp_model();
    throw ValidationError("model", "unknown curve model '" + name + "'");
}

std::vector<cplx> normalize_point(const CurveModel& m, const Point& x, double tol) {
    if (static_cast<int>(x.size()) != m.dim()) throw ValidationError("point", "dimension mismatch with model");
    int drv = -1;
    for (int k = 0; k < m.dim(); ++k)
        if (m.map[k].degree() >= 1 && (drv < 0 || m.map[k].degree() < m.map[drv].degree())) drv = k;
    if (drv < 0) throw ValidationError("model", "constant normalization");
    const ComplexPoly g = m.map[drv] - ComplexPoly::constant(x[drv]);
    const ComplexPoly dg = g.derivative();
    std::vector<cplx> out;
    double dist = kPosInf;
    for (const auto& r : poly_roots(g).roots) {
        cplx t = r.location;
        if (r.multiplicity == 1) {
            for (int it = 0; it < 3; ++it) {
                const cplx d = dg(t);
                if (d == cplx{}) break;
                t -= g(t) / d;
            }
        }
        double worst = 0.0, absres = 0.0;
        for (int k = 0; k < m.dim(); ++k) {
            const double res = std::abs(m.map[k](t) - x[k]);
            absres = std::max(absres, res);
            worst = std::max(worst, res / std::max(residual_scale(m.map[k], t, x[k]), 1e-300));
        }
        dist = std::min(dist, absres);
        if (worst > tol || !(std::abs(t) < m.param_radius)) continue;
        const bool dup = std::any_of(out.begin(), out.end(), [&](cplx o) {
            return std::abs(o - t) <= 1e-9 * std::max(1.0, std::abs(t));
        });
        if (!dup) out.push_back(t);
    }
    if (out.empty()) {
        std::ostringstream msg;
        msg << "point is not on the " << m.name << " model (residual distance ~ " << dist << ")";
        throw ValidationError("point", msg.str());
    }
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        return a.imag() != b.imag() ? a.imag() > b.imag() : a.real() < b.real();
    });
    return out;
}

ProjectiveDisc pushforward(const CurveModel& m, const ProjectiveDisc& h) {
    if (h.dim() != 1) throw ValidationError("disc", "parameter discs are one dimensional");
    int D = 0;
    for (const auto& p : m.map) D = std::max(D, p.degree());
    const ComplexPoly& q = h.lift()[0];
    const ComplexPoly& p = h.lift()[1];
    std::vector<ComplexPoly> ppow{ComplexPoly::constant(1.0)}, qpow{ComplexPoly::constant(1.0)};
    for (int i = 1; i <= D; ++i) {
        ppow.push_back(ppow.back() * p);
        qpow.push_back(qpow.back() * q);
    }
    std::vector<ComplexPoly> lift{qpow[D]};
    for (const auto& mk : m.map) {
        ComplexPoly s;
        for (int i = 0; i <= mk.degree(); ++i)
            if (mk.coeff(i) != cplx{}) s += mk.coeff(i) * (ppow[i] * qpow[D - i]);
        lift.push_back(s);
    }
    return ProjectiveDisc(std::move(lift));
}

PolyDisc pushforward(const CurveModel& m, const PolyDisc& h) {
    if (h.dim() != 1) throw ValidationError("disc", "parameter discs are one dimensional");
    std::vector<ComplexPoly> c;
    for (const auto& mk : m.map) c.push_back(compose(mk, h.coords[0]));
    return PolyDisc(std::move(c));
}

PolyDisc lift_disc(const CurveModel& m, const PolyDisc& g, double tol) {
    if (g.dim() != m.dim()) throw ValidationError("disc", "dimension mismatch with model");
    if (g.is_constant()) {
        const auto ts = normalize_point(m, g.center(), tol);
        if (ts.size() != 1) throw ValidationError("disc", "lift undefined: constant disc at a singular point");
        return PolyDisc({ComplexPoly::constant(ts[0])});
    }
    int deg = 0;
    for (const auto& c : g.coords) deg = std::max(deg, c.degree());
    int n = 64;
    while (n < 4 * (deg + 1)) n *= 2;
    const auto grid = circle_grid(n);
    std::vector<std::vector<cplx>> cands(static_cast<size_t>(n));
    int j0 = -1;
    for (int j = 0; j < n; ++j) {
        cands[j] = normalize_point(m, g.eval(grid->node(j)), tol);
        if (j0 < 0 && cands[j].size() == 1) j0 = j;
    }
    if (j0 < 0) throw ValidationError("disc", "lift undefined: image in the singular set");
    std::vector<cplx> t(static_cast<size_t>(n));
    t[j0] = cands[j0][0];
    for (int s = 1; s < n; ++s) {
        const int j = (j0 + s) % n;
        const cplx prev = t[(j + n - 1) % n];
        // Continuation picks the branch nearest the previous sample.
        t[j] = *std::min_element(cands[j].begin(), cands[j].end(),
                                 [&](cplx a, cplx b) { return std::abs(a - prev) < std::abs(b - prev); });
    }
    std::vector<cplx> coef(static_cast<size_t>(n));
    double cmax = 0.0;
    for (int k = 0; k < n; ++k) {
        cplx s{};
        for (int j = 0; j < n; ++j) s += t[j] * std::conj(std::pow(grid->node(j), k));
        coef[k] = s / static_cast<double>(n);
        cmax = std::max(cmax, std::abs(coef[k]));
    }
    for (int k = n / 2; k < n; ++k)
        if (std::abs(coef[k]) > 1e-6 * std::max(cmax, 1.0))
            throw NumericError("branch tracking inconsistency: lift is not holomorphic");
    coef.resize(static_cast<size_t>(n / 2));
    const PolyDisc h({ComplexPoly(std::move(coef)).trimmed(1e-14)});
    const auto check = circle_grid(n, std::numbers::pi);
    for (int j = 0; j < n; ++j) {
        for (double r : {1.0, 0.5}) {
            const cplx z = r * check->node(j);
            const Point a = m.eval(h.coords[0](z)), b = g.eval(z);
            for (size_t k = 0; k < a.size(); ++k)
                if (std::abs(a[k] - b[k]) > std::max(tol, 1e-10) * std::max(1.0, std::abs(b[k])))
                    throw NumericError("lift residual exceeds tolerance");
        }
    }
    return h;
}

// ------------------------------------------------------------ counterexample

double CounterexampleData::v(cplx z) const {
    return (std::norm(z) - 9.0) * (k.c0 + k.c1 * z.imag());
}

double CounterexampleData::A(cplx z) const { return k.a * z.real() + k.b * z.imag() + k.c; }

double CounterexampleData::predicted_gap() const { return std::abs(A(omega1) - A(omega2)); }

Json CounterexampleData::to_json() const {
    return {{"constants", {{"c0", k.c0}, {"c1", k.c1}, {"a", k.a}, {"b", k.b}, {"c", k.c}}},
            {"omega", {cplx_pair(omega1), cplx_pair(omega2)}},
            {"p", point_to_json(p)},
            {"v_at_omegas", {v(omega1), v(omega2)}},
            {"A_at_omegas", {A(omega1), A(omega2)}}};
}

CounterexampleData build_counterexample(const CounterexampleConstants& k, bool bypass_validation) {
    for (double c : {k.c0, k.c1, k.a, k.b, k.c})
        if (!std::isfinite(c)) throw ValidationError("constants", "must be finite");
    CounterexampleData d;
    d.k = k;
    d.model = nodal_model();
    d.omega1 = d.model.singular_preimages[0][0];
    d.omega2 = d.model.singular_preimages[0][1];
    d.p = d.model.singular_points[0];
    if (bypass_validation) return d;

    const int n = 200;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const cplx z(-3.0 + 6.0 * i / (n - 1), -3.0 + 6.0 * j / (n - 1));
            if (std::abs(z) > 3.0) continue;
            if (d.v(z) > 1e-12) throw ValidationError("c1", "condition failed: v <= 0 on the closed disc");
            const double w = k.c0 + k.c1 * z.imag();
            const double hxx = 2 * w, hyy = 2 * w + 4 * k.c1 * z.imag(), hxy = 2 * k.c1 * z.real();
            if (hxx < -1e-12 || hyy < -1e-12 || hxx * hyy - hxy * hxy < -1e-12)
                throw ValidationError("c1", "condition failed: v convex (Hessian not positive semidefinite)");
        }
    }
    const double sv = std::max({1.0, std::abs(d.v(d.omega1)), std::abs(d.v(d.omega2))});
    if (std::abs(d.v(d.omega1) - d.v(d.omega2)) <= 1e-12 * sv)
        throw ValidationError("c1", "condition failed: v(omega1) != v(omega2)");
    if (std::abs(d.vA(d.omega1) - d.vA(d.omega2)) > 1e-12 * sv)
        throw ValidationError("b", "condition failed: (v+A)(omega1) = (v+A)(omega2)");
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const cplx z(-3.0 + 6.0 * i / (n - 1), -3.0 + 6.0 * j / (n - 1));
            if (std::abs(z) <= 3.0 && d.vA(z) > 1e-12)
                throw ValidationError("c", "condition failed: v + A <= 0 on the closed disc");
        }
    }
    for (int j = 0; j < 4 * n; ++j)
        if (d.A(std::polar(3.0, 2 * std::numbers::pi * j / (4 * n))) > 1e-12)
            throw ValidationError("c", "condition failed: v + A <= 0 on the closed disc");
    return d;
}

Json CounterexampleReport::to_json() const {
    Json j = data.to_json();
    j["EP_at_omegas"] = {extended_to_json(ep_at_omega[0]), extended_to_json(ep_at_omega[1])};
    j["EP_at_p"] = extended_to_json(ep_at_p);
    j["EP_at_p_joint"] = extended_to_json(ep_at_p_joint);
    j["min_minus_A_at_omegas"] = std::min(-data.A(data.omega1), -data.A(data.omega2));
    j["limsup"] = extended_to_json(limsup);
    j["gap"] = gap;
    j["predicted_gap"] = predicted_gap;
    j["usc_ok_at_p"] = usc_ok_at_p;
    j["riesz"] = {{"ER_at_p", extended_to_json(riesz_at_p)}, {"gap", riesz_gap}};
    j["interior_checks"] = checks_json(interior);
    j["usc_at_regular_points"] = checks_json(usc_regular);
    j["psh_check_at_regular_points"] = checks_json(psh_regular);
    return j;
}

CounterexampleReport counterexample_envelope_gap(const CounterexampleData& d, const CounterexampleOptions& opts) {
    if (opts.radii.size() < 2) throw ValidationError("radii", "need at least two radii");
    const CurveModel& model = d.model;
    const auto fam = make_disc_domain_family(0.0, 3.0, opts.degree);
    EnvelopeOptions eo = opts.envelope;
    eo.boundary_domain = DomainSpec::disc(0.0, 3.0);
    eo.optimizer.seed = opts.seed;
    const ScalarField u{1, [d](std::span<const cplx> z) { return -d.vA(z[0]); }, true, "-(v+A)", {}};
    auto ep = [&](cplx t) { return poisson_envelope(u, fam, {t}, eo).value; };
    MemoField memo(1, [&](const Point& t) { return ep(t[0]); }, 1e-9, opts.threads);
    auto ep_param = [&](cplx t) { return memo(Point{t}); };
    // EP_{-v_X} on the curve: minimum over the parameter preimages.
    auto on_curve = [&](const Point& x) {
        double m = kPosInf;
        for (cplx t : normalize_point(model, x, 1e-7)) m = std::min(m, ep_param(t));
        return m;
    };
    auto riesz_on_curve = [&](const Point& x) {
        const cplx t = normalize_point(model, x, 1e-7).front();
        return d.vA(t) + on_curve(x);
    };
    auto branch_shell = [&](std::vector<cplx> centers) {
        return [&model, centers, n = opts.probe_samples](double r) {
            std::vector<Point> pts;
            for (cplx c : centers)
                for (int i = 0; i < n; ++i)
                    pts.push_back(model.eval(c + std::polar(r, 2 * std::numbers::pi * (i + 0.5) / n)));
            return pts;
        };
    };

    CounterexampleReport rep;
    rep.data = d;
    rep.predicted_gap = d.predicted_gap();
    rep.ep_at_omega[0] = ep(d.omega1);
    rep.ep_at_omega[1] = ep(d.omega2);
    rep.ep_at_p = std::min(rep.ep_at_omega[0], rep.ep_at_omega[1]);

    // One search over discs through either preimage: parameter 0 selects the branch.
    {
        const DiscFunctional h = poisson_functional(u, eo.boundary_samples, eo.quadrature_guard);
        const Objective o1 = make_envelope_objective(h, fam, {d.omega1}, eo);
        const Objective o2 = make_envelope_objective(h, fam, {d.omega2}, eo);
        const Objective joint = [&](std::span<const double> th) {
            return th[0] < 0.5 ? o1(th.subspan(1)) : o2(th.subspan(1));
        };
        OptimizerConfig cfg = eo.optimizer;
        cfg.box = {Bounds{0.0, 1.0}};
        cfg.box.insert(cfg.box.end(), fam.box.begin(), fam.box.end());
        std::vector<std::vector<double>> starts;
        for (double sel : {0.25, 0.75}) {
            std::vector<std::vector<double>> base{fam.constant_params()};
            for (auto& c : fam.canonical_starts()) base.push_back(c);
            for (auto& b : base) {
                b.insert(b.begin(), sel);
                starts.push_back(b);
            }
        }
        rep.ep_at_p_joint = minimize(joint, cfg, starts).value;
    }

    const auto usc_p = usc_probe(on_curve, d.p, opts.radii, opts.probe_samples, opts.usc_tolerance,
                                 branch_shell({d.omega1, d.omega2}));
    rep.limsup = usc_p.limsup;
    rep.gap = rep.limsup - rep.ep_at_p;
    rep.usc_ok_at_p = usc_p.usc_ok;

    rep.riesz_at_p = d.vA(d.omega1) + rep.ep_at_p;
    const auto usc_r = usc_probe(riesz_on_curve, d.p, opts.radii, opts.probe_samples, opts.usc_tolerance,
                                 branch_shell({d.omega1, d.omega2}));
    rep.riesz_gap = usc_r.limsup - rep.riesz_at_p;

    for (cplx t : opts.regular_points) {
        const auto r = usc_probe(on_curve, model.eval(t), opts.radii, opts.probe_samples, opts.usc_tolerance,
                                 branch_shell({t}));
        rep.usc_regular.push_back({t, r.gap, 0.0, r.usc_ok});
        const auto ph = psh_check([&](const Point& q) { return ep_param(q[0]); }, {t}, 4, 0.1, 16,
                                  opts.psh_tolerance, opts.seed);
        rep.psh_regular.push_back({t, ph.worst_margin, 0.0, ph.ok});
    }

    for (int i = 0; i < opts.interior_points; ++i) {
        const double r = 0.3 + 2.2 * (i + 0.5) / std::max(1, opts.interior_points);
        const cplx t = std::polar(r, 2.399963229728653 * i);
        const double val = ep_param(t);
        rep.interior.push_back({t, val, -d.A(t), std::abs(val + d.A(t)) <= 2e-2});
    }

    rep.field.base = {0.0};
    rep.field.re_min = rep.field.im_min = -2.1;
    rep.field.re_max = rep.field.im_max = 2.1;
    rep.field.n_re = rep.field.n_im = opts.grid_n;
    rep.field.functional = "EP_{-(v+A)}";
    rep.field.family = family_to_json(fam);
    rep.field.seed = opts.seed;
    rep.field.fill([&](const Point& q) { return ep_param(q[0]); }, opts.threads);
    return rep;
}

Json LelongCounterexampleReport::to_json() const {
    return {{"EL_at_omegas", {extended_to_json(el_at_omega[0]), extended_to_json(el_at_omega[1])}},
            {"oracle_at_omegas", {extended_to_json(oracle_at_omega[0]), extended_to_json(oracle_at_omega[1])}},
            {"EL_at_p", extended_to_json(el_at_p)},
            {"limsup", extended_to_json(limsup)},
            {"gap", gap},
            {"note", note}};
}

LelongCounterexampleReport lelong_counterexample(const WeightField& alpha, int degree, const EnvelopeOptions& opts) {
    const CurveModel model = nodal_model();
    const cplx w[2] = {model.singular_preimages[0][0], model.singular_preimages[0][1]};
    for (const auto& s : alpha.support) {
        if (s.y.size() != 1) throw ValidationError("alpha", "weights live on the parameter plane");
        if (!(std::abs(s.y[0]) < 3.0)) throw ValidationError("alpha", "support must lie in the parameter disc 3D");
        for (cplx o : w)
            if (std::abs(s.y[0] - o) < 1e-9) throw ValidationError("alpha", "alpha must vanish at omega1 and omega2");
    }
    LelongCounterexampleReport rep;
    for (int j = 0; j < 2; ++j) {
        double g = 0.0;
        for (const auto& s : alpha.support)
            g += s.weight * std::log(std::abs(3.0 * (w[j] - s.y[0]) / (9.0 - std::conj(s.y[0]) * w[j])));
        rep.oracle_at_omega[j] = g;
    }
    if (!alpha.empty() && std::abs(rep.oracle_at_omega[0] - rep.oracle_at_omega[1]) < 1e-6)
        throw ValidationError("alpha", "EL_alpha(omega1) = EL_alpha(omega2) by symmetry; choose an asymmetric alpha");
    const auto fam = make_disc_domain_family(0.0, 3.0, degree);
    EnvelopeOptions eo = opts;
    eo.boundary_domain = DomainSpec::disc(0.0, 3.0);
    for (int j = 0; j < 2; ++j)
        rep.el_at_omega[j] = envelope(lelong_functional(alpha, false), fam, {w[j]}, eo).value;
    rep.el_at_p = std::min(rep.el_at_omega[0], rep.el_at_omega[1]);
    rep.limsup = std::max(rep.el_at_omega[0], rep.el_at_omega[1]);
    rep.gap = rep.limsup - rep.el_at_p;
    rep.note = "envelope values are upper bounds from a finite disc family; the gap is significant only when it "
               "exceeds the deviation from the Green-function oracle";
    return rep;
}

} // namespace discenv
