#include "discenv/json_io.hpp"

#include <cmath>
#include <limits>

#include "discenv/error.hpp"

namespace discenv {
namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

} // namespace

void require_known_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
    if (!obj.is_object()) throw ValidationError(path.empty() ? "<root>" : path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ValidationError(join(path, it.key()), "unknown field");
    }
}

const Json& member(const Json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(join(path, key), "missing required field");
    return *it;
}

double json_number(const Json& j, const std::string& field) {
    if (!j.is_number()) throw ValidationError(field, "expected a number");
    return j.get<double>();
}

double json_extended(const Json& j, const std::string& field) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        throw ValidationError(field, "expected a number, \"-inf\" or \"inf\"");
    }
    return json_number(j, field);
}

Json extended_to_json(double v) {
    if (v == -std::numeric_limits<double>::infinity()) return "-inf";
    if (v == std::numeric_limits<double>::infinity()) return "inf";
    if (std::isnan(v)) return nullptr;
    return v;
}

int json_int(const Json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ValidationError(field, "expected an integer");
    return j.get<int>();
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const Json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError(field, "expected a complex number [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json point_to_json(const Point& p) {
    Json a = Json::array();
    for (auto v : p) a.push_back(to_json(v));
    return a;
}

Point point_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ValidationError(field, "expected a list of [re, im] pairs");
    Point p;
    for (size_t i = 0; i < j.size(); ++i) p.push_back(cplx_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    return p;
}

Json poly_to_json(const ComplexPoly& p) {
    Json a = Json::array();
    for (auto c : p.coeffs()) a.push_back(to_json(c));
    return a;
}

ComplexPoly poly_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ValidationError(field, "expected a coefficient list");
    std::vector<cplx> c;
    for (size_t i = 0; i < j.size(); ++i) c.push_back(cplx_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    return ComplexPoly(std::move(c));
}

Json disc_to_json(const ProjectiveDisc& f) {
    Json lift = Json::array();
    for (const auto& p : f.lift()) lift.push_back(poly_to_json(p));
    return {{"schema_version", kSchemaVersion}, {"type", "projective-disc"}, {"lift", lift}};
}

ProjectiveDisc disc_from_json(const Json& j) {
    require_known_keys(j, {"schema_version", "type", "lift"}, "disc");
    if (json_int(member(j, "schema_version", "disc"), "disc.schema_version") != kSchemaVersion)
        throw ValidationError("disc.schema_version", "unsupported schema version");
    const auto& lj = member(j, "lift", "disc");
    if (!lj.is_array()) throw ValidationError("disc.lift", "expected a list of polynomials");
    std::vector<ComplexPoly> lift;
    for (size_t i = 0; i < lj.size(); ++i) lift.push_back(poly_from_json(lj[i], "disc.lift[" + std::to_string(i) + "]"));
    return ProjectiveDisc(std::move(lift));
}

Json divisor_to_json(const Divisor& d) {
    Json a = Json::array();
    for (const auto& p : d.points) a.push_back({{"z", to_json(p.z)}, {"mult", p.mult}});
    return a;
}

Json family_to_json(const DiscFamily& f) {
    Json j{{"schema_version", kSchemaVersion},
           {"kind", family_kind_name(f.kind)},
           {"dim", f.dim},
           {"degree", f.degree},
           {"param_dim", f.param_dim()}};
    if (f.kind == FamilyKind::Good) j["pole_budget"] = f.pole_budget;
    if (f.kind != FamilyKind::DiscDomain) j["coef_bound"] = f.coef_bound;
    if (f.kind == FamilyKind::DiscDomain) {
        j["center"] = to_json(f.disc_center);
        j["radius"] = f.disc_radius;
    }
    return j;
}

DiscFamily family_from_json(const Json& j) {
    require_known_keys(j, {"schema_version", "kind", "dim", "degree", "param_dim", "pole_budget", "coef_bound",
                           "center", "radius"},
                       "family");
    if (j.contains("schema_version") && json_int(j["schema_version"], "family.schema_version") != kSchemaVersion)
        throw ValidationError("family.schema_version", "unsupported schema version");
    const auto& kj = member(j, "kind", "family");
    if (!kj.is_string()) throw ValidationError("family.kind", "expected a string");
    const FamilyKind kind = family_kind_from_name(kj.get<std::string>());
    const int degree = json_int(member(j, "degree", "family"), "family.degree");
    DiscFamily f;
    if (kind == FamilyKind::DiscDomain) {
        f = make_disc_domain_family(cplx_from_json(member(j, "center", "family"), "family.center"),
                                    json_number(member(j, "radius", "family"), "family.radius"), degree);
    } else {
        const int dim = json_int(member(j, "dim", "family"), "family.dim");
        const double bound = j.contains("coef_bound") ? json_number(j["coef_bound"], "family.coef_bound") : 2.0;
        if (kind == FamilyKind::Affine) {
            f = make_affine_family(dim, degree, bound);
        } else {
            f = make_affine_family(dim, degree, bound);
            const int poles = json_int(member(j, "pole_budget", "family"), "family.pole_budget");
            if (poles < 1) throw ValidationError("family.pole_budget", "pole budget must be at least 1");
            f.kind = FamilyKind::Good;
            f.pole_budget = poles;
            f.box.insert(f.box.begin(), static_cast<size_t>(2 * poles), Bounds{-kPoleBox, kPoleBox});
        }
    }
    if (j.contains("param_dim") && json_int(j["param_dim"], "family.param_dim") != f.param_dim())
        throw ValidationError("family.param_dim", "inconsistent with the family description");
    return f;
}

Json domain_to_json(const DomainSpec& d) {
    Json comps = Json::array();
    for (const auto& c : d.components()) {
        if (auto* b = std::get_if<BallSet>(&c)) {
            comps.push_back({{"type", "ball"}, {"center", point_to_json(b->center)}, {"radius", b->radius}});
        } else if (auto* p = std::get_if<PolydiscSet>(&c)) {
            comps.push_back({{"type", "polydisc"}, {"center", point_to_json(p->center)}, {"radii", p->radii}});
        } else {
            const auto& h = std::get<HalfspaceSet>(c);
            comps.push_back({{"type", "halfspaces"}, {"a", h.a}, {"b", h.b}});
        }
    }
    return {{"dim", d.dim()}, {"components", comps}};
}

DomainSpec domain_from_json(const Json& j, const std::string& path) {
    require_known_keys(j, {"dim", "components"}, path);
    const int dim = json_int(member(j, "dim", path), path + ".dim");
    const auto& cj = member(j, "components", path);
    if (!cj.is_array() || cj.empty()) throw ValidationError(path + ".components", "expected a nonempty list");
    std::vector<DomainPrimitive> comps;
    for (size_t i = 0; i < cj.size(); ++i) {
        const std::string cp = path + ".components[" + std::to_string(i) + "]";
        const auto& c = cj[i];
        if (!c.is_object()) throw ValidationError(cp, "expected an object");
        const auto& tj = member(c, "type", cp);
        if (!tj.is_string()) throw ValidationError(cp + ".type", "expected a string");
        const auto type = tj.get<std::string>();
        if (type == "ball") {
            require_known_keys(c, {"type", "center", "radius"}, cp);
            comps.push_back(BallSet{point_from_json(member(c, "center", cp), cp + ".center"),
                                    json_number(member(c, "radius", cp), cp + ".radius")});
        } else if (type == "polydisc") {
            require_known_keys(c, {"type", "center", "radii"}, cp);
            const auto& rj = member(c, "radii", cp);
            if (!rj.is_array()) throw ValidationError(cp + ".radii", "expected a list of numbers");
            std::vector<double> radii;
            for (size_t k = 0; k < rj.size(); ++k) radii.push_back(json_number(rj[k], cp + ".radii"));
            comps.push_back(PolydiscSet{point_from_json(member(c, "center", cp), cp + ".center"), radii});
        } else if (type == "halfspaces") {
            require_known_keys(c, {"type", "a", "b"}, cp);
            HalfspaceSet h;
            const auto& aj = member(c, "a", cp);
            const auto& bj = member(c, "b", cp);
            if (!aj.is_array() || !bj.is_array()) throw ValidationError(cp, "a and b must be lists");
            for (const auto& row : aj) {
                if (!row.is_array()) throw ValidationError(cp + ".a", "expected a list of rows");
                std::vector<double> r;
                for (const auto& v : row) r.push_back(json_number(v, cp + ".a"));
                h.a.push_back(std::move(r));
            }
            for (const auto& v : bj) h.b.push_back(json_number(v, cp + ".b"));
            comps.push_back(std::move(h));
        } else {
            throw ValidationError(cp + ".type", "unknown component type '" + type + "'");
        }
    }
    return DomainSpec(dim, std::move(comps));
}

} // namespace discenv
