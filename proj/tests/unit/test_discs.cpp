#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "discenv/disc.hpp"
#include "discenv/error.hpp"
#include "discenv/family.hpp"
#include "discenv/json_io.hpp"
#include "discenv/winding.hpp"

using namespace discenv;
using std::numbers::pi;

namespace {

const cplx w1 = std::polar(1.0, 2 * pi / 3), w2 = std::polar(1.0, -2 * pi / 3);

double dist(const Point& a, const Point& b) {
    double s = 0.0;
    for (size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - b[k]);
    return std::sqrt(s);
}

bool contains_point(const Divisor& d, cplx z, int mult, double tol = 1e-9) {
    for (const auto& p : d.points)
        if (std::abs(p.z - z) < tol && p.mult == mult) return true;
    return false;
}

std::vector<double> random_params(const DiscFamily& f, std::mt19937_64& rng) {
    std::vector<double> th;
    for (const auto& b : f.box) th.push_back(std::uniform_real_distribution<double>(b.lo, b.hi)(rng));
    return th;
}

} // namespace

TEST_CASE("eval examples") {
    const Point x{cplx(1, 2), cplx(-0.5, 0)};
    auto c = PolyDisc::constant(x);
    for (cplx z : {cplx(0), cplx(0.3, 0.9), cplx(-1, 0)}) CHECK(c.eval(z) == x);

    PolyDisc f({ComplexPoly({0.0, 1.0}), ComplexPoly({0.0, 0.0, 1.0})});
    auto v = f.eval(cplx(0, 1));
    CHECK(std::abs(v[0] - cplx(0, 1)) < 1e-15);
    CHECK(std::abs(v[1] - cplx(-1, 0)) < 1e-15);

    ProjectiveDisc pd({ComplexPoly({-0.5, 1.0}), ComplexPoly::constant(1.0)});
    CHECK(pd.eval(0.5).at_infinity);
    CHECK(!pd.eval(0.0).at_infinity);
    CHECK(std::abs(pd.center()[0] - cplx(-2.0)) < 1e-15);
}

TEST_CASE("multiplicity examples") {
    CHECK(multiplicity(PolyDisc({ComplexPoly({0.0, 1.0}), ComplexPoly({0.0, 0.0, 1.0})}), 0.0) == 1);
    CHECK(multiplicity(PolyDisc({ComplexPoly({0.0, 0.0, 1.0})}), 0.0) == 2);
    CHECK(multiplicity(PolyDisc({ComplexPoly({0.0, 0.0, 0.0, 1.0}), ComplexPoly({0.0, 0.0, 1.0})}), 0.0) == 2);
    CHECK(multiplicity(PolyDisc({ComplexPoly({0.0, 0.0, 1.0})}), 0.5) == 1);
    CHECK_THROWS_AS(multiplicity(PolyDisc::constant({cplx(1.0)}), 0.0), ValidationError);
}

TEST_CASE("infinity_divisor examples") {
    auto d1 = infinity_divisor(ProjectiveDisc({ComplexPoly({-0.5, 1.0}), ComplexPoly::constant(1.0)}));
    REQUIRE(d1.points.size() == 1);
    CHECK(contains_point(d1, 0.5, 1));

    auto d2 = infinity_divisor(ProjectiveDisc({ComplexPoly::constant(1.0), ComplexPoly({0.3, -2.0, 1.0, 4.0})}));
    CHECK(d2.empty());

    auto sq = ComplexPoly({-0.3, 1.0}).pow(2);
    auto d3 = infinity_divisor(ProjectiveDisc({sq, ComplexPoly::constant(1.0), ComplexPoly({0.0, 1.0})}));
    REQUIRE(d3.points.size() == 1);
    CHECK(contains_point(d3, 0.3, 2, 1e-6));

    // Common roots of the whole lift are removable.
    auto lin = ComplexPoly({-0.4, 1.0});
    auto d4 = infinity_divisor(ProjectiveDisc({lin, lin * cplx(2.0), lin * ComplexPoly({1.0, 1.0})}));
    CHECK(d4.empty());

    CHECK_THROWS_AS(infinity_divisor(ProjectiveDisc({ComplexPoly(), ComplexPoly::constant(1.0)})), ValidationError);
}

TEST_CASE("preimages examples") {
    auto d1 = preimages(PolyDisc({ComplexPoly({0.0, 0.0, 1.0})}), {cplx(0.25)});
    CHECK(d1.points.size() == 2);
    CHECK(contains_point(d1, 0.5, 1));
    CHECK(contains_point(d1, -0.5, 1));

    PolyDisc nodal({ComplexPoly({0.0, 0.0, 0.0, 1.0}), ComplexPoly({0.0, 1.0, 1.0})});
    CHECK(preimages(nodal, {cplx(1.0), cplx(-1.0)}).empty());

    PolyDisc scaled({ComplexPoly({0.0, 0.0, 0.0, 27.0}), ComplexPoly({0.0, 3.0, 9.0})});
    auto d3 = preimages(scaled, {cplx(1.0), cplx(-1.0)});
    CHECK(d3.points.size() == 2);
    CHECK(contains_point(d3, w1 / 3.0, 1));
    CHECK(contains_point(d3, w2 / 3.0, 1));

    auto d4 = preimages(PolyDisc({ComplexPoly({0.25, -1.0, 1.0})}), {cplx(0.0)});
    REQUIRE(d4.points.size() == 1);
    CHECK(contains_point(d4, 0.5, 2, 1e-6));

    CHECK_THROWS_AS(preimages(PolyDisc::constant({cplx(1.0)}), {cplx(1.0)}), ValidationError);
}

TEST_CASE("preimage multiplicity equals winding count around isolating circles") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        // f = (p(zeta), zeta^2 * s(zeta) + p(zeta)) shares the roots of p with the
        // target y = (0, 0) only where zeta^2 s vanishes as well.
        std::vector<cplx> roots;
        for (int j = 0; j < 3; ++j) roots.emplace_back(u(rng), u(rng));
        roots.push_back(roots[0]); // a double root
        ComplexPoly p = ComplexPoly::from_roots(roots);
        ComplexPoly q = p * ComplexPoly({1.0, cplx(u(rng), u(rng))});
        PolyDisc f({p, q});
        auto d = preimages(f, {cplx(0), cplx(0)});
        for (const auto& pt : d.points) {
            double sep = 1.0 - std::abs(pt.z);
            for (const auto& o : d.points)
                if (&o != &pt) sep = std::min(sep, std::abs(o.z - pt.z));
            if (sep < 1e-2) continue;
            const int w = winding_count([&](cplx z) { return p(z); }, Contour::circle(pt.z, 0.4 * sep));
            CHECK(w == pt.mult);
            ++checked;
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("families: center property and pole budget") {
    std::mt19937_64 rng(77);
    const auto omega = DomainSpec::unit_ball(2);
    std::vector<DiscFamily> families{make_good_family(omega, 3, 2), make_good_family(omega, 6, 3),
                                     make_affine_family(2, 4)};
    for (const auto& fam : families) {
        for (int i = 0; i < 100; ++i) {
            std::uniform_real_distribution<double> u(-3, 3);
            const Point x{cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
            auto th = random_params(fam, rng);
            auto disc = fam.build(x, th);
            CHECK(dist(disc.center(), x) < 1e-10 * (1 + dist(x, Point(2, 0.0))));
            CHECK(infinity_divisor(disc).degree() <= fam.pole_budget);
        }
        // Constant disc at the constant parameters.
        const Point x{cplx(0.2, 0.1), cplx(-0.3, 0)};
        auto c = fam.build(x, fam.constant_params());
        CHECK(c.is_constant());
        CHECK(infinity_divisor(c).empty());
    }
    auto dd = make_disc_domain_family(0.0, 3.0, 2);
    for (int i = 0; i < 100; ++i) {
        std::uniform_real_distribution<double> u(-2, 2);
        const Point x{cplx(u(rng), u(rng))};
        auto disc = dd.build(x, random_params(dd, rng));
        CHECK(dist(disc.center(), x) < 1e-12);
    }
    CHECK(dd.build({cplx(1.0)}, dd.constant_params()).is_constant());
    CHECK_THROWS_AS(dd.build({cplx(3.5)}, dd.constant_params()), ValidationError);
    CHECK_THROWS_AS(make_good_family(DomainSpec(), 2, 1), ValidationError);
}

TEST_CASE("families are continuous in the center") {
    std::mt19937_64 rng(5);
    auto fam = make_good_family(DomainSpec::unit_ball(2), 3, 2);
    for (int i = 0; i < 20; ++i) {
        auto th = random_params(fam, rng);
        const Point x{cplx(1.2, -0.4), cplx(0.3, 0.8)};
        Point xh = x;
        xh[1] += cplx(1e-7, -1e-7);
        auto a = fam.build(x, th), b = fam.build(xh, th);
        for (cplx z : {cplx(0.3, 0.2), cplx(-0.7, 0.1)}) {
            auto pa = a.eval(z), pb = b.eval(z);
            if (pa.at_infinity || pb.at_infinity) continue;
            if (std::abs(a.denominator()(z)) < 1e-3) continue;
            CHECK(dist(pa.z, pb.z) < 1e-4);
        }
    }
}

TEST_CASE("rotation invariance of the infinity divisor") {
    ProjectiveDisc f({ComplexPoly::from_roots(std::vector<cplx>{cplx(0.3, 0.4), cplx(-0.5, 0.1)}),
                      ComplexPoly({1.0, 2.0}), ComplexPoly({0.0, 1.0, 1.0})});
    const double theta = 0.7;
    auto d = infinity_divisor(f), dr = infinity_divisor(f.rotated(theta));
    REQUIRE(d.points.size() == dr.points.size());
    double s = 0, sr = 0;
    for (const auto& p : d.points) {
        s += p.mult * std::log(std::abs(p.z));
        CHECK(contains_point(dr, p.z * std::polar(1.0, -theta), p.mult, 1e-10));
    }
    for (const auto& p : dr.points) sr += p.mult * std::log(std::abs(p.z));
    CHECK(std::abs(s - sr) < 1e-12);
}

TEST_CASE("one-pole line disc") {
    const Point z{cplx(1.2, 0.4), cplx(-0.6, 1.0)};
    auto f = blaschke_line_disc(z, 1.0);
    CHECK(dist(f.center(), z) < 1e-12);
    auto s = sample_boundary(f, *circle_grid(64));
    Point b;
    for (int j = 0; j < 64; ++j) {
        s.point(j, b);
        CHECK(dist(b, Point(2, 0.0)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    auto d = infinity_divisor(f);
    REQUIRE(d.points.size() == 1);
    CHECK(-std::log(std::abs(d.points[0].z)) == doctest::Approx(std::log(dist(z, Point(2, 0.0)))).epsilon(1e-12));
    CHECK(boundary_in_affine_space(f));
    CHECK(!boundary_in_affine_space(ProjectiveDisc({ComplexPoly({-1.0, 1.0}), ComplexPoly::constant(1.0)})));
}

TEST_CASE("JSON round trips") {
    ProjectiveDisc f({ComplexPoly({cplx(0.5, -1), 1.0}), ComplexPoly({0.25, cplx(0, 2)})});
    auto j = disc_to_json(f);
    CHECK(j["schema_version"] == kSchemaVersion);
    auto g = disc_from_json(Json::parse(j.dump()));
    for (size_t k = 0; k < f.lift().size(); ++k) CHECK(f.lift()[k] == g.lift()[k]);

    for (const auto& fam : {make_good_family(DomainSpec::unit_ball(2), 4, 2, 3.0), make_affine_family(1, 5),
                            make_disc_domain_family(cplx(1, 1), 3.0, 2)}) {
        auto back = family_from_json(Json::parse(family_to_json(fam).dump()));
        CHECK(back.kind == fam.kind);
        CHECK(back.param_dim() == fam.param_dim());
        CHECK(back.degree == fam.degree);
        CHECK(back.pole_budget == fam.pole_budget);
    }
    Json bad = disc_to_json(f);
    bad["colour"] = "red";
    try {
        disc_from_json(bad);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "disc.colour");
    }

    DomainSpec two(1, {BallSet{{cplx(-2)}, 1.0}, BallSet{{cplx(2)}, 1.0}});
    auto d2 = domain_from_json(domain_to_json(two));
    CHECK(d2.components().size() == 2);
    CHECK(d2.contains(Point{cplx(2.5)}));
    CHECK(!d2.contains(Point{cplx(0.0)}));
}

TEST_CASE("domain membership and convexity flag") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    HalfspaceSet h{{{1, 0, 0, 0}, {-1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}}, {1, 1, 0.5, 2}};
    std::vector<DomainSpec> convex{DomainSpec::unit_ball(2), DomainSpec::unit_polydisc(2), DomainSpec(2, {h})};
    for (const auto& d : convex) {
        CHECK(d.convex());
        int pairs = 0;
        for (int i = 0; i < 100000 && pairs < 200; ++i) {
            Point a{cplx(u(rng), u(rng)), cplx(u(rng), u(rng))}, b{cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
            if (!d.contains(a) || !d.contains(b)) continue;
            ++pairs;
            Point m{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
            CHECK(d.contains(m));
        }
        CHECK(pairs > 50);
        CHECK(d.contains(d.interior_point()));
    }
    CHECK(!DomainSpec::unit_ball(2).contains(Point{cplx(1.0), cplx(0)}));
    DomainSpec two(1, {BallSet{{cplx(-2)}, 1.0}, BallSet{{cplx(2)}, 1.0}});
    CHECK(!two.convex());
}
