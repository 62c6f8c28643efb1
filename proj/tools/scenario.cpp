#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "discenv/error.hpp"
#include "discenv/extremal.hpp"
#include "discenv/lemma1.hpp"
#include "discenv/optimizer.hpp"
#include "discenv/parallel.hpp"
#include "discenv/singular_models.hpp"

namespace discenv::cli {
namespace {

using Job = std::function<RunResult()>;

std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string idx(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

// ---- payload readers --------------------------------------------------------

const Json* opt(const Json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double num(const Json& j, const char* key, const std::string& path, double def) {
    const Json* v = opt(j, key);
    return v ? json_number(*v, sub(path, key)) : def;
}

int integer(const Json& j, const char* key, const std::string& path, int def) {
    const Json* v = opt(j, key);
    return v ? json_int(*v, sub(path, key)) : def;
}

bool boolean(const Json& j, const char* key, const std::string& path, bool def) {
    const Json* v = opt(j, key);
    if (!v) return def;
    if (!v->is_boolean()) throw ValidationError(sub(path, key), "expected a boolean");
    return v->get<bool>();
}

std::string string(const Json& j, const char* key, const std::string& path, std::optional<std::string> def = {}) {
    const Json* v = opt(j, key);
    if (!v) {
        if (def) return *def;
        throw ValidationError(sub(path, key), "missing required field");
    }
    if (!v->is_string()) throw ValidationError(sub(path, key), "expected a string");
    return v->get<std::string>();
}

const Json& array(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ValidationError(path, "expected an array");
    return j;
}

std::vector<double> numbers(const Json& j, const std::string& path) {
    std::vector<double> out;
    for (size_t i = 0; i < array(j, path).size(); ++i) out.push_back(json_number(j[i], idx(path, i)));
    return out;
}

std::vector<Point> points(const Json& j, const std::string& path, int dim) {
    std::vector<Point> out;
    for (size_t i = 0; i < array(j, path).size(); ++i) {
        out.push_back(point_from_json(j[i], idx(path, i)));
        if (static_cast<int>(out.back().size()) != dim)
            throw ValidationError(idx(path, i), "expected a point of dimension " + std::to_string(dim));
    }
    return out;
}

std::vector<cplx> complexes(const Json& j, const std::string& path) {
    std::vector<cplx> out;
    for (size_t i = 0; i < array(j, path).size(); ++i) out.push_back(cplx_from_json(j[i], idx(path, i)));
    return out;
}

void positive(int v, const std::string& field) {
    if (v < 1) throw ValidationError(field, "must be positive");
}

EnvelopeOptions envelope_options(const Json* j, const std::string& path, std::uint64_t seed) {
    EnvelopeOptions o;
    o.optimizer.seed = seed;
    if (!j) return o;
    require_known_keys(*j, {"restarts", "max_evals", "boundary_samples", "tolerance", "quadrature_guard"}, path);
    o.optimizer.restarts = integer(*j, "restarts", path, o.optimizer.restarts);
    o.optimizer.max_evals = integer(*j, "max_evals", path, o.optimizer.max_evals);
    o.boundary_samples = integer(*j, "boundary_samples", path, o.boundary_samples);
    o.optimizer.tolerance = num(*j, "tolerance", path, o.optimizer.tolerance);
    o.quadrature_guard = boolean(*j, "quadrature_guard", path, true);
    if (o.optimizer.restarts < 0) throw ValidationError(sub(path, "restarts"), "must be nonnegative");
    positive(o.optimizer.max_evals, sub(path, "max_evals"));
    if (o.boundary_samples < 8) throw ValidationError(sub(path, "boundary_samples"), "must be at least 8");
    return o;
}

Json options_json(const EnvelopeOptions& o) {
    return {{"restarts", o.optimizer.restarts},
            {"max_evals", o.optimizer.max_evals},
            {"boundary_samples", o.boundary_samples},
            {"tolerance", o.optimizer.tolerance},
            {"quadrature_guard", o.quadrature_guard}};
}

double norm2(std::span<const cplx> z) {
    double s = 0.0;
    for (auto v : z) s += std::norm(v);
    return s;
}

/// Named test fields: constant, log-abs, log-norm, log-plus-norm, neg-norm2.
ScalarField scalar_field(const Json& j, const std::string& path) {
    require_known_keys(j, {"type", "dim", "coord", "value", "negate"}, path);
    const std::string type = string(j, "type", path);
    const int dim = integer(j, "dim", path, 1);
    positive(dim, sub(path, "dim"));
    const int coord = integer(j, "coord", path, 0);
    if (coord < 0 || coord >= dim) throw ValidationError(sub(path, "coord"), "out of range");
    ScalarField u;
    if (type == "constant") {
        u = constant_field(dim, num(j, "value", path, 0.0));
    } else if (type == "log-abs") {
        u = {dim, [coord](std::span<const cplx> z) { return z[coord] == cplx{} ? kNegInf : std::log(std::abs(z[coord])); },
             true, "log-abs", {}};
    } else if (type == "log-norm") {
        u = {dim, [](std::span<const cplx> z) { const double s = norm2(z); return s == 0.0 ? kNegInf : 0.5 * std::log(s); },
             true, "log-norm", {}};
    } else if (type == "log-plus-norm") {
        u = {dim, [](std::span<const cplx> z) { return std::max(0.0, 0.5 * std::log(norm2(z))); }, true, "log-plus-norm",
             {}};
    } else if (type == "neg-norm2") {
        u = {dim, [](std::span<const cplx> z) { return -norm2(z); }, true, "neg-norm2", {}};
    } else {
        throw ValidationError(sub(path, "type"), "unknown field type '" + type + "'");
    }
    if (type != "constant" && opt(j, "value")) throw ValidationError(sub(path, "value"), "only for constant fields");
    return boolean(j, "negate", path, false) ? negated(u) : u;
}

WeightField weights(const Json& j, const std::string& path) {
    std::vector<WeightPoint> w;
    for (size_t i = 0; i < array(j, path).size(); ++i) {
        const std::string p = idx(path, i);
        require_known_keys(j[i], {"y", "weight"}, p);
        w.push_back({point_from_json(member(j[i], "y", p), sub(p, "y")), num(j[i], "weight", p, 1.0)});
    }
    try {
        return WeightField(std::move(w));
    } catch (const ValidationError& e) {
        throw ValidationError(path, e.what());
    }
}

Json weights_json(const WeightField& a) {
    Json out = Json::array();
    for (const auto& s : a.support) out.push_back({{"y", point_to_json(s.y)}, {"weight", s.weight}});
    return out;
}

DiscFamily family(const Json& j, const std::string& path) {
    try {
        return family_from_json(j);
    } catch (const ValidationError& e) {
        // family_from_json reports "family.<key>"; rebase onto the payload path.
        std::string f = e.field();
        if (f.rfind("family", 0) == 0) f = path + f.substr(6);
        const std::string msg = e.what();
        const auto colon = msg.find(": ");
        throw ValidationError(f, colon == std::string::npos ? msg : msg.substr(colon + 2));
    }
}

DomainSpec domain(const Json& j, const std::string& path) { return domain_from_json(j, path); }

FieldGrid grid_spec(const Json& j, const std::string& path, int dim) {
    require_known_keys(j, {"base", "coord", "re", "im", "n"}, path);
    FieldGrid g;
    g.base = opt(j, "base") ? point_from_json(j["base"], sub(path, "base")) : Point(dim, cplx{});
    if (static_cast<int>(g.base.size()) != dim) throw ValidationError(sub(path, "base"), "dimension mismatch");
    g.coord = integer(j, "coord", path, 0);
    if (g.coord < 0 || g.coord >= dim) throw ValidationError(sub(path, "coord"), "out of range");
    auto range = [&](const char* key, double& lo, double& hi) {
        const auto v = numbers(member(j, key, path), sub(path, key));
        if (v.size() != 2 || !(v[0] <= v[1])) throw ValidationError(sub(path, key), "expected [min, max]");
        lo = v[0];
        hi = v[1];
    };
    range("re", g.re_min, g.re_max);
    range("im", g.im_min, g.im_max);
    const auto& n = member(j, "n", path);
    if (!n.is_array() || n.size() != 2) throw ValidationError(sub(path, "n"), "expected [n_re, n_im]");
    g.n_re = json_int(n[0], sub(path, "n[0]"));
    g.n_im = json_int(n[1], sub(path, "n[1]"));
    positive(g.n_re, sub(path, "n[0]"));
    positive(g.n_im, sub(path, "n[1]"));
    if (static_cast<long>(g.n_re) * g.n_im > 1'000'000) throw ValidationError(sub(path, "n"), "grid too large");
    return g;
}

void add_grid(RunResult& r, const std::string& stem, const FieldGrid& g) {
    r.artifacts.push_back({stem + ".csv", g.to_csv()});
    r.artifacts.push_back({stem + ".json", dump(g.sidecar())});
    r.summary["field"] = {{"csv", stem + ".csv"}, {"sidecar", stem + ".json"}, {"count", g.values.size()}};
}

/// count points with |z| cycling through radii, deterministic in seed.
std::vector<Point> shell_points(int dim, const std::vector<double>& radii, int count, std::uint64_t seed) {
    std::vector<Point> out;
    for (int i = 0; i < count; ++i) {
        Point z = unit_direction(dim, seed, static_cast<std::uint64_t>(i));
        for (auto& c : z) c *= radii[static_cast<size_t>(i) % radii.size()];
        out.push_back(std::move(z));
    }
    return out;
}

/// count points with |z| uniform in [0, max_radius).
std::vector<Point> ball_points(int dim, double max_radius, int count, std::uint64_t seed) {
    std::vector<Point> out;
    std::uint64_t s = seed ^ 0x5eed5eedULL;
    for (int i = 0; i < count; ++i) {
        Point z = unit_direction(dim, seed + 1, static_cast<std::uint64_t>(i));
        const double r = max_radius * uniform01(s);
        for (auto& c : z) c *= r;
        out.push_back(std::move(z));
    }
    return out;
}

/// "points": explicit list; "random_points": {"count", "radii"}; "inside_points": {"count", "max_radius"}.
struct PointSet {
    std::vector<Point> pts;
    std::vector<bool> inside;
};

PointSet point_set(const Json& p, const std::string& path, int dim, std::uint64_t seed) {
    PointSet s;
    if (const Json* e = opt(p, "points"))
        for (auto& z : points(*e, sub(path, "points"), dim)) {
            s.pts.push_back(z);
            s.inside.push_back(false);
        }
    if (const Json* r = opt(p, "random_points")) {
        const std::string rp = sub(path, "random_points");
        require_known_keys(*r, {"count", "radii"}, rp);
        const int count = json_int(member(*r, "count", rp), sub(rp, "count"));
        positive(count, sub(rp, "count"));
        const auto radii = numbers(member(*r, "radii", rp), sub(rp, "radii"));
        if (radii.empty()) throw ValidationError(sub(rp, "radii"), "need at least one radius");
        for (auto& z : shell_points(dim, radii, count, seed)) {
            s.pts.push_back(z);
            s.inside.push_back(false);
        }
    }
    if (const Json* r = opt(p, "inside_points")) {
        const std::string ip = sub(path, "inside_points");
        require_known_keys(*r, {"count", "max_radius"}, ip);
        const int count = json_int(member(*r, "count", ip), sub(ip, "count"));
        positive(count, sub(ip, "count"));
        const double mr = json_number(member(*r, "max_radius", ip), sub(ip, "max_radius"));
        if (!(mr > 0.0)) throw ValidationError(sub(ip, "max_radius"), "must be positive");
        for (auto& z : ball_points(dim, mr, count, seed + 17)) {
            s.pts.push_back(z);
            s.inside.push_back(true);
        }
    }
    if (s.pts.empty()) throw ValidationError(path, "no evaluation points (points, random_points or inside_points)");
    return s;
}

DiscFunctional make_functional(const std::string& name, const std::optional<ScalarField>& u,
                               const std::optional<WeightField>& a, int n, bool guarded, const std::string& path) {
    auto need_field = [&]() -> const ScalarField& {
        if (!u) throw ValidationError(sub(path, "field"), "functional '" + name + "' needs a field");
        return *u;
    };
    auto need_alpha = [&]() -> const WeightField& {
        if (!a) throw ValidationError(sub(path, "alpha"), "functional '" + name + "' needs alpha");
        return *a;
    };
    if (name == "poisson") return poisson_functional(need_field(), n, guarded);
    if (name == "riesz") return riesz_functional(need_field(), n, guarded);
    if (name == "lelong") return lelong_functional(need_alpha(), false);
    if (name == "lelong-reduced") return lelong_functional(need_alpha(), true);
    if (name == "k") return k_disc_functional(need_alpha());
    if (name == "j") return j_disc_functional();
    throw ValidationError(sub(path, "functional"), "unknown functional '" + name + "'");
}

// ---- commands ----------------------------------------------------------------

Job plan_green(const Json& p, const RunContext& ctx) {
    const std::string P = "payload";
    require_known_keys(p, {"poles", "weights", "grid", "boundary_samples", "submean", "points"}, P);
    Divisor d;
    const Json& poles = array(member(p, "poles", P), sub(P, "poles"));
    for (size_t i = 0; i < poles.size(); ++i) {
        const std::string pp = idx(sub(P, "poles"), i);
        require_known_keys(poles[i], {"z", "mult"}, pp);
        const int m = integer(poles[i], "mult", pp, 1);
        positive(m, sub(pp, "mult"));
        d.points.push_back({cplx_from_json(member(poles[i], "z", pp), sub(pp, "z")), m});
    }
    try {
        d.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(sub(P, "poles"), e.what());
    }
    std::vector<double> w;
    if (const Json* wj = opt(p, "weights")) {
        w = numbers(*wj, sub(P, "weights"));
        if (w.size() != d.points.size()) throw ValidationError(sub(P, "weights"), "one weight per pole");
    } else {
        for (const auto& q : d.points) w.push_back(q.mult);
    }
    const int nb = integer(p, "boundary_samples", P, 512);
    positive(nb, sub(P, "boundary_samples"));
    std::optional<FieldGrid> grid;
    if (const Json* g = opt(p, "grid")) grid = grid_spec(*g, sub(P, "grid"), 1);
    int sm_count = 0;
    double sm_radius = 0.02;
    if (const Json* s = opt(p, "submean")) {
        require_known_keys(*s, {"count", "radius"}, sub(P, "submean"));
        sm_count = integer(*s, "count", sub(P, "submean"), 50);
        sm_radius = num(*s, "radius", sub(P, "submean"), 0.02);
        positive(sm_count, sub(P, "submean.count"));
        if (!(sm_radius > 0.0 && sm_radius < 0.5)) throw ValidationError(sub(P, "submean.radius"), "must be in (0, 0.5)");
    }
    std::vector<Point> pts;
    if (const Json* e = opt(p, "points")) pts = points(*e, sub(P, "points"), 1);

    return [=]() mutable {
        RunResult r;
        auto g = [&](cplx z) { return green_sum(d, w, z); };
        Json s;
        s["value_at_0"] = extended_to_json(g(0.0));
        double worst = 0.0;
        for (int i = 0; i < nb; ++i) worst = std::max(worst, std::abs(g(std::polar(1.0, 2 * std::numbers::pi * i / nb))));
        s["boundary_samples"] = nb;
        s["max_abs_boundary"] = worst;
        if (sm_count > 0) {
            std::uint64_t st = ctx.seed;
            double margin = kPosInf;
            int tested = 0;
            while (tested < sm_count) {
                const cplx c(2 * uniform01(st) - 1, 2 * uniform01(st) - 1);
                if (std::abs(c) > 1.0 - 2 * sm_radius) continue;
                bool near = false;
                for (const auto& q : d.points) near = near || std::abs(c - q.z) < 2 * sm_radius;
                if (near) continue;
                double mean = 0.0;
                const int m = 64;
                for (int k = 0; k < m; ++k) mean += g(c + std::polar(sm_radius, 2 * std::numbers::pi * k / m));
                margin = std::min(margin, mean / m - g(c));
                ++tested;
            }
            s["submean"] = {{"count", tested}, {"radius", sm_radius}, {"worst_margin", margin}, {"ok", margin >= -1e-10}};
        }
        Json vals = Json::array();
        for (const auto& z : pts) vals.push_back({{"z", to_json(z[0])}, {"value", extended_to_json(g(z[0]))}});
        s["values"] = vals;
        r.summary = s;
        if (grid) {
            grid->functional = "green";
            grid->seed = ctx.seed;
            grid->fill([&](const Point& z) { return g(z[0]); }, ctx.threads);
            add_grid(r, "field", *grid);
        }
        return r;
    };
}

Job plan_functional(const Json& p, const RunContext&) {
    const std::string P = "payload";
    require_known_keys(p, {"functional", "disc", "field", "alpha", "nodes"}, P);
    const std::string name = string(p, "functional", P);
    ProjectiveDisc f;
    try {
        f = disc_from_json(member(p, "disc", P));
    } catch (const ValidationError& e) {
        throw ValidationError(sub(P, "disc"), e.what());
    }
    std::optional<ScalarField> u;
    if (const Json* fj = opt(p, "field")) u = scalar_field(*fj, sub(P, "field"));
    std::optional<WeightField> a;
    if (const Json* aj = opt(p, "alpha")) a = weights(*aj, sub(P, "alpha"));
    const int n = integer(p, "nodes", P, kDefaultCircleNodes);
    if (n < 8) throw ValidationError(sub(P, "nodes"), "must be at least 8");
    const DiscFunctional h = make_functional(name, u, a, n, false, P);
    if (u && u->dim != f.dim()) throw ValidationError(sub(P, "field.dim"), "dimension mismatch with the disc");
    return [=]() {
        RunResult r;
        r.summary = {{"functional", name}, {"nodes", n}, {"value", extended_to_json(h(f, n))}, {"center", point_to_json(f.center())}};
        return r;
    };
}

Job plan_envelope(const Json& p, const RunContext& ctx) {
    const std::string P = "payload";
    require_known_keys(p, {"functional", "field", "alpha", "family", "domain", "options", "points", "random_points",
                           "inside_points", "grid"},
                       P);
    const std::string name = string(p, "functional", P);
    const DiscFamily fam = family(member(p, "family", P), sub(P, "family"));
    std::optional<ScalarField> u;
    if (const Json* fj = opt(p, "field")) {
        u = scalar_field(*fj, sub(P, "field"));
        if (u->dim != fam.dim) throw ValidationError(sub(P, "field.dim"), "dimension mismatch with the family");
    }
    std::optional<WeightField> a;
    if (const Json* aj = opt(p, "alpha")) a = weights(*aj, sub(P, "alpha"));
    EnvelopeOptions o = envelope_options(opt(p, "options"), sub(P, "options"), ctx.seed);
    if (const Json* dj = opt(p, "domain")) {
        o.boundary_domain = domain(*dj, sub(P, "domain"));
        if (o.boundary_domain->dim() != fam.dim) throw ValidationError(sub(P, "domain"), "dimension mismatch");
    }
    const DiscFunctional h = make_functional(name, u, a, o.boundary_samples, o.quadrature_guard, P);
    std::optional<FieldGrid> grid;
    if (const Json* g = opt(p, "grid")) grid = grid_spec(*g, sub(P, "grid"), fam.dim);
    PointSet ps;
    if (opt(p, "points") || opt(p, "random_points") || opt(p, "inside_points")) ps = point_set(p, P, fam.dim, ctx.seed);
    if (ps.pts.empty() && !grid) throw ValidationError(P, "no evaluation points or grid");

    return [=]() mutable {
        RunResult r;
        auto results = parallel_map<EnvelopeResult>(ps.pts.size(), ctx.threads,
                                                    [&](size_t i) { return envelope(h, fam, ps.pts[i], o); });
        Json out = Json::array();
        for (size_t i = 0; i < ps.pts.size(); ++i) {
            Json e = results[i].to_json();
            e["x"] = point_to_json(ps.pts[i]);
            if (u) e["field_at_x"] = extended_to_json((*u)(ps.pts[i]));
            out.push_back(e);
        }
        r.summary = {{"functional", name}, {"family", family_to_json(fam)}, {"options", options_json(o)}, {"results", out}};
        if (grid) {
            grid->functional = name;
            grid->family = family_to_json(fam);
            grid->seed = ctx.seed;
            grid->fill([&](const Point& z) { return envelope(h, fam, z, o).value; }, ctx.threads);
            add_grid(r, "field", *grid);
        }
        return r;
    };
}

Job plan_chain(const Json& p, const RunContext& ctx) {
    const std::string P = "payload";
    require_known_keys(p, {"alpha", "points", "random", "reference", "family", "outer_family", "domain", "options",
                           "tolerance"},
                       P);
    const DiscFamily fam = opt(p, "family") ? family(p["family"], sub(P, "family")) : make_disc_domain_family(0.0, 1.0, 1);
    const DiscFamily outer =
        opt(p, "outer_family") ? family(p["outer_family"], sub(P, "outer_family")) : make_disc_domain_family(0.0, 1.0, 1);
    if (fam.dim != 1 || outer.dim != 1) throw ValidationError(sub(P, "family"), "chain instances live in C");
    const DomainSpec dom = opt(p, "domain") ? domain(p["domain"], sub(P, "domain")) : DomainSpec::unit_ball(1);
    ChainOptions co;
    co.outer_family = outer;
    co.tolerance = num(p, "tolerance", P, 5e-2);
    {
        const std::string op = sub(P, "options");
        const Json empty = Json::object();
        const Json& oj = opt(p, "options") ? p["options"] : empty;
        require_known_keys(oj, {"inner", "k_field", "outer"}, op);
        co.inner = envelope_options(opt(oj, "inner"), sub(op, "inner"), ctx.seed);
        co.outer = envelope_options(opt(oj, "outer"), sub(op, "outer"), ctx.seed);
        if (const Json* k = opt(oj, "k_field")) co.k_field = envelope_options(k, sub(op, "k_field"), ctx.seed);
        co.inner.boundary_domain = co.outer.boundary_domain = dom;
        if (co.k_field) co.k_field->boundary_domain = dom;
    }
    struct Instance {
        WeightField alpha;
        Point x;
        bool reference = false;
    };
    std::vector<Instance> inst;
    if (const Json* aj = opt(p, "alpha")) {
        const WeightField a = weights(*aj, sub(P, "alpha"));
        const Json* pj = opt(p, "points");
        if (!pj) throw ValidationError(sub(P, "points"), "required with alpha");
        for (auto& x : points(*pj, sub(P, "points"), 1)) inst.push_back({a, x});
    } else if (opt(p, "points")) {
        throw ValidationError(sub(P, "points"), "requires alpha");
    }
    if (const Json* rj = opt(p, "random")) {
        const std::string rp = sub(P, "random");
        require_known_keys(*rj, {"count", "support_size", "max_weight", "radius"}, rp);
        const int count = integer(*rj, "count", rp, 20), support = integer(*rj, "support_size", rp, 2);
        const double wmax = num(*rj, "max_weight", rp, 1.0), rad = num(*rj, "radius", rp, 0.7);
        positive(count, sub(rp, "count"));
        positive(support, sub(rp, "support_size"));
        if (!(wmax > 0.0)) throw ValidationError(sub(rp, "max_weight"), "must be positive");
        if (!(rad > 0.0 && rad < 1.0)) throw ValidationError(sub(rp, "radius"), "must be in (0, 1)");
        std::uint64_t st = ctx.seed ^ 0xc4a1ULL;
        auto rnd = [&]() {
            const double r = rad * std::sqrt(uniform01(st)), t = 2 * std::numbers::pi * uniform01(st);
            return std::polar(r, t);
        };
        for (int i = 0; i < count; ++i) {
            std::vector<WeightPoint> w;
            for (int j = 0; j < support; ++j) w.push_back({{rnd()}, wmax * (0.1 + 0.9 * uniform01(st))});
            inst.push_back({WeightField(std::move(w)), {rnd()}});
        }
    }
    if (boolean(p, "reference", P, false)) inst.push_back({WeightField({{{cplx(0, 0)}, 1.0}}), {cplx(0.5, 0)}, true});
    if (inst.empty()) throw ValidationError(P, "no chain instances (alpha + points, random or reference)");

    return [=]() {
        RunResult r;
        Json out = Json::array();
        bool ordered = true, below = true;
        double ref_spread = 0.0, ref_green = 0.0;
        for (const auto& in : inst) {
            const ChainReport c = chain_check(in.alpha, fam, in.x, co);
            ordered = ordered && c.ordered;
            below = below && c.poisson_below;
            Json e = c.to_json();
            e["alpha"] = weights_json(in.alpha);
            e["x"] = point_to_json(in.x);
            e["reference"] = in.reference;
            if (in.reference) {
                ref_spread = c.spread;
                ref_green = std::log(std::abs(in.x[0]));
                e["green_value"] = ref_green;
            }
            out.push_back(e);
        }
        r.summary = {{"instances", out}, {"all_ordered", ordered}, {"all_poisson_below", below},
                     {"tolerance", co.tolerance}};
        if (std::any_of(inst.begin(), inst.end(), [](const Instance& i) { return i.reference; }))
            r.summary["reference"] = {{"spread", ref_spread}, {"green_value", ref_green}};
        return r;
    };
}

Job plan_siciak(const Json& p, const RunContext& ctx) {
    const std::string P = "payload";
    require_known_keys(p, {"domain", "methods", "family", "outer_family", "options", "memo_resolution", "closed_form",
                           "closed_form_radius", "points", "random_points", "inside_points", "lelong_probe"},
                       P);
    const DomainSpec om = domain(member(p, "domain", P), sub(P, "domain"));
    const int dim = om.dim();
    std::vector<std::string> methods{"lempert"};
    if (const Json* m = opt(p, "methods")) {
        methods.clear();
        for (size_t i = 0; i < array(*m, sub(P, "methods")).size(); ++i) {
            if (!(*m)[i].is_string()) throw ValidationError(idx(sub(P, "methods"), i), "expected a string");
            const std::string s = (*m)[i].get<std::string>();
            if (s != "lempert" && s != "ebj" && s != "two-stage")
                throw ValidationError(idx(sub(P, "methods"), i), "unknown method '" + s + "'");
            methods.push_back(s);
        }
        if (methods.empty()) throw ValidationError(sub(P, "methods"), "need at least one method");
    }
    auto has = [methods](const char* m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
    if (has("lempert") && !om.convex()) throw ValidationError(sub(P, "methods"), "lempert requires a convex domain");
    const DiscFamily fam = opt(p, "family") ? family(p["family"], sub(P, "family")) : make_good_family(om, 1, 1);
    const DiscFamily outer = opt(p, "outer_family") ? family(p["outer_family"], sub(P, "outer_family")) : make_affine_family(dim, 1);
    if (fam.dim != dim || outer.dim != dim) throw ValidationError(sub(P, "family"), "dimension mismatch with the domain");
    if (outer.kind != FamilyKind::Affine) throw ValidationError(sub(P, "outer_family"), "outer discs must be affine");
    const std::string op = sub(P, "options");
    const Json empty = Json::object();
    const Json& oj = opt(p, "options") ? p["options"] : empty;
    require_known_keys(oj, {"lempert", "inner", "outer"}, op);
    const EnvelopeOptions lo = envelope_options(opt(oj, "lempert"), sub(op, "lempert"), ctx.seed);
    const EnvelopeOptions io = envelope_options(opt(oj, "inner"), sub(op, "inner"), ctx.seed);
    const EnvelopeOptions oo = envelope_options(opt(oj, "outer"), sub(op, "outer"), ctx.seed);
    const double res = num(p, "memo_resolution", P, 1e-3);
    if (!(res > 0.0)) throw ValidationError(sub(P, "memo_resolution"), "must be positive");
    std::string cf;
    if (const Json* c = opt(p, "closed_form")) {
        cf = string(p, "closed_form", P);
        if (!is_closed_form_name(cf)) throw ValidationError(sub(P, "closed_form"), "unknown closed form '" + cf + "'");
        (void)c;
    }
    const double cf_radius = num(p, "closed_form_radius", P, 1.0);
    const PointSet ps = point_set(p, P, dim, ctx.seed);
    std::vector<double> probe_radii;
    int probe_samples = 0;
    if (const Json* lp = opt(p, "lelong_probe")) {
        const std::string pp = sub(P, "lelong_probe");
        require_known_keys(*lp, {"radii", "samples"}, pp);
        probe_radii = numbers(member(*lp, "radii", pp), sub(pp, "radii"));
        probe_samples = integer(*lp, "samples", pp, 8);
        positive(probe_samples, sub(pp, "samples"));
        if (probe_radii.size() < 2) throw ValidationError(sub(pp, "radii"), "need at least two radii");
        if (!has("lempert") && !has("ebj")) throw ValidationError(pp, "needs the lempert or ebj method");
    }

    return [=]() {
        RunResult r;
        std::unique_ptr<MemoField> memo;
        if (has("two-stage")) memo = make_ebj_memo(om, fam, io, res, ctx.threads);
        Json out = Json::array();
        double max_err[3] = {0.0, 0.0, 0.0};
        double min_value = kPosInf;
        bool inside_zero = true;
        const char* keys[3] = {"lempert", "ebj", "two_stage"};
        for (size_t i = 0; i < ps.pts.size(); ++i) {
            const Point& z = ps.pts[i];
            Json e{{"x", point_to_json(z)}, {"norm", std::sqrt(norm2(z))}, {"inside", ps.inside[i]}};
            double v[3];
            bool got[3] = {false, false, false};
            if (has("lempert")) {
                v[0] = lempert_V(om, z, fam, lo).value;
                got[0] = true;
            }
            if (has("ebj")) {
                v[1] = ebj_field(om, z, fam, lo).value;
                got[1] = true;
            }
            if (has("two-stage")) {
                const auto t = siciak_V(*memo, outer, z, oo);
                v[2] = t.outer.value;
                got[2] = true;
                e["inner_at_x"] = extended_to_json(t.inner_at_x);
                e["inner_evaluations"] = t.inner_evaluations;
            }
            std::optional<double> ref;
            if (!cf.empty()) {
                ref = closed_form_V(cf, z, cf_radius);
                e["closed_form"] = *ref;
            }
            for (int k = 0; k < 3; ++k) {
                if (!got[k]) continue;
                e[keys[k]] = extended_to_json(v[k]);
                min_value = std::min(min_value, v[k]);
                if (ps.inside[i] && v[k] != 0.0) inside_zero = false;
                if (ref) {
                    const double err = std::abs(v[k] - *ref);
                    e[std::string("abs_error_") + keys[k]] = err;
                    max_err[k] = std::max(max_err[k], std::isfinite(err) ? err : kPosInf);
                }
            }
            out.push_back(e);
        }
        Json s{{"domain", domain_to_json(om)}, {"family", family_to_json(fam)}, {"outer_family", family_to_json(outer)},
               {"methods", methods},           {"points", out},                 {"min_value", extended_to_json(min_value)},
               {"inside_exactly_zero", inside_zero}};
        if (!cf.empty()) {
            s["closed_form"] = cf;
            Json me;
            for (int k = 0; k < 3; ++k)
                if ((k == 0 && has("lempert")) || (k == 1 && has("ebj")) || (k == 2 && has("two-stage")))
                    me[keys[k]] = extended_to_json(max_err[k]);
            s["max_abs_error"] = me;
        }
        if (memo) s["memo_points"] = memo->size();
        if (!probe_radii.empty()) {
            const bool use_l = has("lempert");
            const GrowthReport g = lelong_class_probe(
                [&](const Point& z) { return use_l ? lempert_V(om, z, fam, lo).value : ebj_field(om, z, fam, lo).value; },
                dim, probe_radii, probe_samples);
            s["lelong_probe"] = g.to_json();
        }
        r.summary = s;
        return r;
    };
}

Job plan_siciak_variety(const Json& p, const RunContext& ctx) {
    const std::string P = "payload";
    require_known_keys(p, {"model", "param_domain", "family", "outer_family", "options", "memo_resolution", "params",
                           "points", "closed_form"},
                       P);
    const CurveModel model = curve_model(string(p, "model", P));
    const DomainSpec om = opt(p, "param_domain") ? domain(p["param_domain"], sub(P, "param_domain")) : DomainSpec::unit_ball(1);
    if (om.dim() != 1) throw ValidationError(sub(P, "param_domain"), "parameter domain lives in C");
    const DiscFamily fam = opt(p, "family") ? family(p["family"], sub(P, "family")) : make_good_family(om, 1, 1);
    const DiscFamily outer = opt(p, "outer_family") ? family(p["outer_family"], sub(P, "outer_family")) : make_affine_family(1, 1);
    const std::string op = sub(P, "options");
    const Json empty = Json::object();
    const Json& oj = opt(p, "options") ? p["options"] : empty;
    require_known_keys(oj, {"inner", "outer"}, op);
    const EnvelopeOptions io = envelope_options(opt(oj, "inner"), sub(op, "inner"), ctx.seed);
    const EnvelopeOptions oo = envelope_options(opt(oj, "outer"), sub(op, "outer"), ctx.seed);
    const double res = num(p, "memo_resolution", P, 1e-3);
    if (!(res > 0.0)) throw ValidationError(sub(P, "memo_resolution"), "must be positive");
    const bool cf = boolean(p, "closed_form", P, false);
    if (cf && model.name != "cusp") throw ValidationError(sub(P, "closed_form"), "closed form known for the cusp model only");
    std::vector<Point> xs;
    if (const Json* t = opt(p, "params"))
        for (cplx v : complexes(*t, sub(P, "params"))) xs.push_back(model.eval(v));
    if (const Json* x = opt(p, "points")) {
        auto more = points(*x, sub(P, "points"), model.dim());
        xs.insert(xs.end(), more.begin(), more.end());
    }
    if (xs.empty()) throw ValidationError(P, "no evaluation points (params or points)");
    for (size_t i = 0; i < xs.size(); ++i) normalize_point(model, xs[i], 1e-7);

    return [=]() {
        RunResult r;
        auto memo = make_psi_memo(model, om, fam, io, res, ctx.threads);
        Json out = Json::array();
        double max_err = 0.0, min_value = kPosInf;
        for (const auto& x : xs) {
            const auto t = siciak_V_variety(model, *memo, x, outer, oo);
            Json e{{"x", point_to_json(x)},
                   {"params", Json::array()},
                   {"value", extended_to_json(t.outer.value)},
                   {"inner_at_x", extended_to_json(t.inner_at_x)}};
            for (cplx s : normalize_point(model, x, 1e-7)) e["params"].push_back(to_json(s));
            min_value = std::min(min_value, t.outer.value);
            if (cf) {
                const double ref = closed_form_V("cusp-model", x);
                e["closed_form"] = ref;
                e["abs_error"] = std::abs(t.outer.value - ref);
                max_err = std::max(max_err, std::abs(t.outer.value - ref));
            }
            out.push_back(e);
        }
        r.summary = {{"model", model.to_json()}, {"param_domain", domain_to_json(om)}, {"points", out},
                     {"min_value", extended_to_json(min_value)}, {"memo_points", memo->size()}};
        if (cf) r.summary["max_abs_error"] = max_err;
        return r;
    };
}

Job plan_counterexample(const Json& p, const RunContext& ctx) {
    const std::string P = "payload";
    require_known_keys(p, {"constants", "bypass", "degree", "options", "interior_points", "regular_points", "radii",
                           "probe_samples", "usc_tolerance", "psh_tolerance", "grid_n", "lelong"},
                       P);
    CounterexampleConstants k;
    if (const Json* c = opt(p, "constants")) {
        const std::string cp = sub(P, "constants");
        require_known_keys(*c, {"c0", "c1", "a", "b", "c"}, cp);
        k.c0 = num(*c, "c0", cp, k.c0);
        k.c1 = num(*c, "c1", cp, k.c1);
        k.a = num(*c, "a", cp, k.a);
        k.b = num(*c, "b", cp, k.b);
        k.c = num(*c, "c", cp, k.c);
    }
    const bool bypass = boolean(p, "bypass", P, false);
    CounterexampleOptions co;
    co.degree = integer(p, "degree", P, co.degree);
    positive(co.degree, sub(P, "degree"));
    co.envelope = envelope_options(opt(p, "options"), sub(P, "options"), ctx.seed);
    co.interior_points = integer(p, "interior_points", P, co.interior_points);
    if (co.interior_points < 0) throw ValidationError(sub(P, "interior_points"), "must be nonnegative");
    if (const Json* rp = opt(p, "regular_points")) co.regular_points = complexes(*rp, sub(P, "regular_points"));
    if (const Json* rd = opt(p, "radii")) co.radii = numbers(*rd, sub(P, "radii"));
    co.probe_samples = integer(p, "probe_samples", P, co.probe_samples);
    positive(co.probe_samples, sub(P, "probe_samples"));
    co.usc_tolerance = num(p, "usc_tolerance", P, co.usc_tolerance);
    co.psh_tolerance = num(p, "psh_tolerance", P, co.psh_tolerance);
    co.grid_n = integer(p, "grid_n", P, co.grid_n);
    positive(co.grid_n, sub(P, "grid_n"));
    co.seed = ctx.seed;
    co.threads = ctx.threads;
    std::optional<WeightField> la;
    int ldeg = 1;
    EnvelopeOptions lo;
    if (const Json* l = opt(p, "lelong")) {
        const std::string lp = sub(P, "lelong");
        require_known_keys(*l, {"alpha", "degree", "options"}, lp);
        la = weights(member(*l, "alpha", lp), sub(lp, "alpha"));
        ldeg = integer(*l, "degree", lp, 1);
        positive(ldeg, sub(lp, "degree"));
        lo = envelope_options(opt(*l, "options"), sub(lp, "options"), ctx.seed);
    }
    // Constant validation runs before any envelope work.
    const CounterexampleData d = build_counterexample(k, bypass);

    return [=]() {
        RunResult r;
        const CounterexampleReport rep = counterexample_envelope_gap(d, co);
        r.summary = rep.to_json();
        if (la) r.summary["lelong"] = lelong_counterexample(*la, ldeg, lo).to_json();
        FieldGrid g = rep.field;
        g.seed = ctx.seed;
        add_grid(r, "field", g);
        return r;
    };
}

Job plan_lemma1(const Json& p, const RunContext& ctx) {
    const std::string P = "payload";
    require_known_keys(p, {"zeta", "arcs", "widen", "r_min", "k", "ks", "k_range", "eps", "threshold", "dump_roots"}, P);
    const ComplexPoly zeta = poly_from_json(member(p, "zeta", P), sub(P, "zeta"));
    std::vector<Arc> arcs;
    const Json& aj = array(member(p, "arcs", P), sub(P, "arcs"));
    for (size_t i = 0; i < aj.size(); ++i) {
        const auto v = numbers(aj[i], idx(sub(P, "arcs"), i));
        if (v.size() != 2) throw ValidationError(idx(sub(P, "arcs"), i), "expected [t_start, t_end]");
        arcs.push_back({v[0], v[1]});
    }
    ArcSet j;
    try {
        j = ArcSet(arcs);
    } catch (const ValidationError& e) {
        throw ValidationError(sub(P, "arcs"), e.what());
    }
    if (j.arcs.empty()) throw ValidationError(sub(P, "arcs"), "need at least one arc");
    const double widen = num(p, "widen", P, 0.01), r_min = num(p, "r_min", P, 0.0);
    if (!(widen >= 0.0)) throw ValidationError(sub(P, "widen"), "must be nonnegative");
    if (!(r_min >= 0.0 && r_min < 1.0)) throw ValidationError(sub(P, "r_min"), "must be in [0, 1)");
    const double eps = json_number(member(p, "eps", P), sub(P, "eps"));
    std::vector<int> ks;
    if (const Json* k = opt(p, "k")) ks.push_back(json_int(*k, sub(P, "k")));
    if (const Json* k = opt(p, "ks"))
        for (size_t i = 0; i < array(*k, sub(P, "ks")).size(); ++i) ks.push_back(json_int((*k)[i], idx(sub(P, "ks"), i)));
    if (const Json* k = opt(p, "k_range")) {
        const std::string kp = sub(P, "k_range");
        require_known_keys(*k, {"from", "to", "step"}, kp);
        const int a = json_int(member(*k, "from", kp), sub(kp, "from")), b = json_int(member(*k, "to", kp), sub(kp, "to"));
        const int st = integer(*k, "step", kp, 1);
        positive(st, sub(kp, "step"));
        if (b < a) throw ValidationError(sub(kp, "to"), "must be >= from");
        for (int v = a; v <= b; v += st) ks.push_back(v);
    }
    if (ks.empty()) throw ValidationError(P, "no k values (k, ks or k_range)");
    for (size_t i = 0; i < ks.size(); ++i) {
        positive(ks[i], sub(P, "k"));
        if (i > 0 && ks[i] <= ks[i - 1]) throw ValidationError(sub(P, "ks"), "k values must be increasing");
    }
    const bool threshold = boolean(p, "threshold", P, false), dump_roots = boolean(p, "dump_roots", P, false);
    const auto u = arc_neighborhood(j, r_min, widen);

    return [=]() {
        RunResult r;
        struct Row {
            Json json;
            int holds = -1;  // -1: counts only
            RootSet roots;
        };
        auto rows = parallel_map<Row>(ks.size(), ctx.threads, [&](size_t i) {
            const int k = ks[i];
            Row row;
            if (k > 512) {
                row.json = {{"k", k}, {"count", count_zk_winding(zeta, k, u)}, {"locations", false}};
                return row;
            }
            const Lemma1Report rep = lemma1_check(zeta, j, u, k, eps);
            row.json = rep.to_json();
            row.json["locations"] = true;
            row.holds = rep.holds ? 1 : 0;
            row.roots = rep.solutions;
            return row;
        });
        Json reports = Json::array();
        bool counts_match = true;
        for (const auto& row : rows) {
            reports.push_back(row.json);
            if (row.json["locations"].get<bool>()) counts_match = counts_match && row.json["count"] == row.json["winding"];
        }
        Json s{{"arcs", Json::array()}, {"J_length", j.normalized_length()}, {"widen", widen}, {"r_min", r_min},
               {"eps", eps},           {"reports", reports},             {"counts_match_winding", counts_match}};
        for (const auto& a : j.arcs) s["arcs"].push_back({a.t0, a.t1});
        if (threshold) {
            std::optional<int> t;
            if (rows.back().holds == 1) {
                size_t i = rows.size() - 1;
                while (i > 0 && rows[i - 1].holds == 1) --i;
                t = ks[i];
            }
            s["threshold"] = t ? Json(*t) : Json("not reached");
        }
        r.summary = s;
        if (dump_roots) {
            std::string csv = "k, re, im, mult\n";
            char buf[128];
            for (size_t i = 0; i < ks.size(); ++i)
                for (const auto& root : rows[i].roots.roots) {
                    std::snprintf(buf, sizeof buf, "%d, %.17g, %.17g, %d\n", ks[i], root.location.real(),
                                  root.location.imag(), root.multiplicity);
                    csv += buf;
                }
            r.artifacts.push_back({"roots.csv", csv});
            r.summary["roots_csv"] = "roots.csv";
        }
        return r;
    };
}

const std::map<std::string, Job (*)(const Json&, const RunContext&)>& planners() {
    static const std::map<std::string, Job (*)(const Json&, const RunContext&)> m{
        {"green", plan_green},
        {"functional", plan_functional},
        {"envelope", plan_envelope},
        {"chain", plan_chain},
        {"siciak", plan_siciak},
        {"siciak-variety", plan_siciak_variety},
        {"counterexample", plan_counterexample},
        {"lemma1", plan_lemma1}};
    return m;
}

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"green",  "functional",     "envelope",       "chain",
                                                "siciak", "siciak-variety", "counterexample", "lemma1"};
    return names;
}

bool is_command(const std::string& s) { return planners().count(s) > 0; }

Scenario parse_scenario(const Json& j, const std::string& path) {
    require_known_keys(j, {"schema_version", "command", "payload", "seed", "name"}, path);
    const int v = json_int(member(j, "schema_version", path), sub(path, "schema_version"));
    if (v != kSchemaVersion) throw ValidationError(sub(path, "schema_version"), "unsupported schema version");
    Scenario s;
    s.command = string(j, "command", path);
    if (!is_command(s.command)) throw ValidationError(sub(path, "command"), "unknown command '" + s.command + "'");
    s.payload = member(j, "payload", path);
    if (!s.payload.is_object()) throw ValidationError(sub(path, "payload"), "expected an object");
    if (const Json* sd = opt(j, "seed")) {
        if (!sd->is_number_integer() || (!sd->is_number_unsigned() && sd->get<std::int64_t>() < 0))
            throw ValidationError(sub(path, "seed"), "expected an unsigned integer");
        s.seed = sd->get<std::uint64_t>();
    }
    s.name = string(j, "name", path, s.command);
    if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos || s.name[0] == '.')
        throw ValidationError(sub(path, "name"), "must be a plain file stem");
    return s;
}

Json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError(file.string(), "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
        throw ValidationError(file.string(), std::string("invalid JSON: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& file) { return parse_scenario(read_json_file(file)); }

RunResult run_scenario(const Scenario& s, const RunContext& ctx) {
    const auto it = planners().find(s.command);
    if (it == planners().end()) throw ValidationError("command", "unknown command '" + s.command + "'");
    const Job job = it->second(s.payload, ctx);
    RunResult r = job();
    for (auto& a : r.artifacts) a.file = s.name + "." + a.file;
    if (r.summary.contains("field"))
        for (const char* k : {"csv", "sidecar"}) r.summary["field"][k] = s.name + "." + r.summary["field"][k].get<std::string>();
    if (r.summary.contains("roots_csv")) r.summary["roots_csv"] = s.name + "." + r.summary["roots_csv"].get<std::string>();
    Json wrapped{{"schema_version", kSchemaVersion}, {"status", "ok"},     {"command", s.command},
                 {"seed", ctx.seed},                 {"name", s.name},     {"result", r.summary}};
    r.summary = wrapped;
    return r;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ValidationError(file.string(), "cannot write file");
    out << text;
}

void write_result(const std::filesystem::path& dir, const std::string& name, const RunResult& r) {
    std::filesystem::create_directories(dir);
    write_text(dir / (name + ".summary.json"), dump(r.summary));
    for (const auto& a : r.artifacts) write_text(dir / a.file, a.content);
}

Json error_json(const std::string& kind, const std::string& field, const std::string& message) {
    return {{"schema_version", kSchemaVersion},
            {"status", "error"},
            {"error", {{"kind", kind}, {"field", field}, {"message", message}}}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace discenv::cli
