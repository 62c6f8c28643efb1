#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "discenv/envelope.hpp"
#include "discenv/error.hpp"

using namespace discenv;

namespace {

ScalarField field1(std::function<double(cplx)> g) {
    return {1, [g](std::span<const cplx> z) { return g(z[0]); }, true, "test"};
}

PointField pfield1(std::function<double(cplx)> g) {
    return [g](const Point& z) { return g(z[0]); };
}

EnvelopeOptions small_opts(int restarts = 4, int evals = 600) {
    EnvelopeOptions o;
    o.optimizer.restarts = restarts;
    o.optimizer.max_evals = evals;
    o.boundary_samples = 128;
    return o;
}

double log_abs(cplx z) { return z == cplx{} ? kNegInf : std::log(std::abs(z)); }

} // namespace

TEST_CASE("envelope of a constant is the constant") {
    auto fam = make_affine_family(2, 2);
    auto r = poisson_envelope(constant_field(2, -1.25), fam, {cplx(0.3, 0.1), cplx(-1, 2)}, small_opts());
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(-1.25).epsilon(1e-12));
}

TEST_CASE("envelope of a psh function is the function") {
    auto fam = make_affine_family(1, 2);
    auto u = field1(log_abs);
    for (cplx z0 : {cplx(0.7, 0.2), cplx(-2.0, 1.0), cplx(0.0, -0.3)}) {
        auto r = poisson_envelope(u, fam, {z0}, small_opts());
        CHECK(std::abs(r.value - std::log(std::abs(z0))) < 1e-9);
    }
}

TEST_CASE("envelope of max(0, log|z|) vanishes on the closed unit disc") {
    auto fam = make_affine_family(1, 2);
    auto u = field1([](cplx z) { return std::max(0.0, log_abs(z)); });
    for (cplx z0 : {cplx(0.0, 0.0), cplx(0.5, -0.5), cplx(1.0, 0.0)}) {
        CHECK(poisson_envelope(u, fam, {z0}, small_opts()).value == doctest::Approx(0.0));
    }
}

TEST_CASE("envelope value matches the functional on the best disc") {
    auto u = field1([](cplx z) { return -std::norm(z) + z.real(); });
    auto fam = make_affine_family(1, 2);
    auto o = small_opts();
    auto r = poisson_envelope(u, fam, {cplx(0.2, 0.1)}, o);
    REQUIRE(r.converged);
    CHECK(r.value <= u(Point{cplx(0.2, 0.1)}) + 1e-12);
    CHECK(std::abs(r.value - poisson(u, r.best_disc, o.boundary_samples)) < 1e-9);
}

TEST_CASE("J envelope on the unit ball at |z| = 2 is log 2") {
    auto ball = DomainSpec::unit_ball(2);
    auto fam = make_good_family(ball, 1, 1);
    EnvelopeOptions o;
    o.boundary_domain = ball;
    o.optimizer.restarts = 4;
    o.optimizer.max_evals = 1000;
    auto r = envelope(j_disc_functional(), fam, {cplx(2, 0), cplx(0, 0)}, o);
    REQUIRE(r.converged);
    CHECK(std::abs(r.value - std::log(2.0)) < 5e-2);
    CHECK(r.value >= std::log(2.0) - 1e-6);
    auto inside = envelope(j_disc_functional(), fam, {cplx(0.3, 0), cplx(0, 0.4)}, o);
    CHECK(inside.value == 0.0);
    CHECK(inside.evals == 1);
}

TEST_CASE("infeasible centers report +inf with a diagnostic") {
    auto fam = make_affine_family(1, 2);
    EnvelopeOptions o = small_opts(2, 200);
    o.boundary_domain = DomainSpec::unit_ball(1);
    auto r = envelope(j_disc_functional(), fam, {cplx(3, 0)}, o);
    CHECK(r.value == kPosInf);
    CHECK_FALSE(r.converged);
    CHECK(r.diagnostic.find("no feasible disc") != std::string::npos);
    CHECK_THROWS_AS(envelope(j_disc_functional(), make_affine_family(2, 1), {cplx(3, 0)}, o), ValidationError);
}

TEST_CASE("poisson envelope dominates a psh minorant") {
    auto fam = make_affine_family(1, 2);
    auto u = field1([](cplx z) { return std::abs(z.real()) + 0.3 * std::sin(3 * z.imag()); });
    auto w = [](cplx z) { return z.real() - 0.3; };
    for (cplx z0 : {cplx(0.1, 0.2), cplx(-0.5, 0.0), cplx(0.8, -0.4)}) {
        CHECK(poisson_envelope(u, fam, {z0}, small_opts()).value >= w(z0) - 1e-9);
    }
}

TEST_CASE("monotonicity and majorization") {
    auto fam = make_affine_family(1, 2);
    auto u = field1([](cplx z) { return std::cos(2 * z.real()) + 0.5 * z.imag() * z.imag(); });
    auto u2 = field1([](cplx z) { return std::cos(2 * z.real()) + 0.5 * z.imag() * z.imag() + 0.2 + 0.1 * std::norm(z); });
    for (cplx z0 : {cplx(0.3, 0.1), cplx(-1.0, 0.5)}) {
        const double a = poisson_envelope(u, fam, {z0}, small_opts()).value;
        const double b = poisson_envelope(u2, fam, {z0}, small_opts()).value;
        CHECK(a <= b + 1e-12);
        CHECK(a <= u(Point{z0}) + 1e-12);
    }
}

TEST_CASE("riesz envelope equals u plus the poisson envelope of -u bit for bit") {
    auto fam = make_affine_family(1, 2);
    auto u = field1([](cplx z) { return std::exp(z.real()) * std::cos(z.imag()) + std::norm(z); });
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-1, 1);
    for (int i = 0; i < 5; ++i) {
        const Point x{cplx(d(rng), d(rng))};
        const double lhs = envelope(riesz_functional(u, 128), fam, x, small_opts()).value;
        const double rhs = u(x) + poisson_envelope(negated(u), fam, x, small_opts()).value;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("family growth never increases the envelope") {
    auto u = field1([](cplx z) { return std::abs(z.real()) - 0.5 * std::abs(z.imag()); });
    const Point x{cplx(0.2, 0.3)};
    const double v1 = poisson_envelope(u, make_affine_family(1, 1), x, small_opts()).value;
    const double v3 = poisson_envelope(u, make_affine_family(1, 3), x, small_opts()).value;
    CHECK(v3 <= v1 + 5e-2);
}

TEST_CASE("memo field is order and thread independent") {
    auto g = [](const Point& p) { return std::sin(p[0].real()) + std::cos(3 * p[0].imag()); };
    MemoField a(1, g, 1e-3, 1), b(1, g, 1e-3, 4);
    std::vector<Point> pts;
    for (int i = 0; i < 200; ++i) pts.push_back({cplx(0.01 * i, -0.007 * i)});
    a.prefetch(pts);
    std::vector<double> va, vb;
    for (const auto& p : pts) va.push_back(a(p));
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) vb.insert(vb.begin(), b(*it));
    CHECK(va == vb);
    CHECK(a.size() == 200);
    CHECK(a(Point{cplx(0.01 + 3e-4, -0.007)}) == a(pts[1]));
    CHECK(std::abs(a(pts[3]) - g(pts[3])) < 5e-3);
}

TEST_CASE("two-stage envelope") {
    SUBCASE("zero inner field") {
        MemoField inner(2, [](const Point&) { return 0.0; });
        auto r = two_stage_envelope(inner, make_affine_family(2, 1), {cplx(1, 1), cplx(0, 2)}, small_opts(2, 200));
        CHECK(r.outer.value == 0.0);
    }
    SUBCASE("psh inner field reproduces the inner value") {
        MemoField inner(1, [](const Point& p) { return std::max(0.0, log_abs(p[0])); });
        auto r = two_stage_envelope(inner, make_affine_family(1, 1), {cplx(2, 0)}, small_opts(2, 300));
        CHECK(std::abs(r.outer.value - std::log(2.0)) < 1e-2);
        CHECK(r.inner_at_x == inner(Point{cplx(2, 0)}));
    }
    SUBCASE("unit disc: two-stage over the J field agrees with the single stage") {
        auto disc = DomainSpec::unit_ball(1);
        auto good = make_good_family(disc, 1, 1);
        EnvelopeOptions io = small_opts(2, 300);
        io.boundary_domain = disc;
        io.boundary_samples = 128;
        MemoField inner(1, [&](const Point& p) { return envelope(j_disc_functional(), good, p, io).value; }, 1e-3, 1);
        EnvelopeOptions oo = small_opts(1, 40);
        oo.boundary_samples = 32;
        auto r = two_stage_envelope(inner, make_affine_family(1, 1), {cplx(2, 0)}, oo);
        CHECK(std::abs(r.outer.value - std::log(2.0)) < 5e-2);
        CHECK(r.outer.value <= r.inner_at_x + 1e-9);
    }
}

TEST_CASE("usc probe") {
    const std::vector<double> radii{1e-2, 1e-3, 1e-4};
    auto cont = usc_probe(pfield1([](cplx z) { return z.real() + std::norm(z); }), {cplx(0.3, 0.2)}, radii, 32);
    CHECK(cont.usc_ok);
    auto drop = usc_probe(pfield1([](cplx z) { return z == cplx{} ? -1.0 : 0.0; }), {cplx(0, 0)}, radii, 32);
    CHECK_FALSE(drop.usc_ok);
    CHECK(drop.gap == doctest::Approx(1.0));
    auto c2 = usc_probe([](const Point& p) { return std::abs(p[0]) + std::abs(p[1]); }, {cplx(1, 0), cplx(0, 1)},
                        radii, 16);
    CHECK(c2.usc_ok);
    CHECK_THROWS_AS(usc_probe(pfield1([](cplx) { return 0.0; }), {cplx(0, 0)}, {1e-3, 1e-2}, 8), ValidationError);
}

TEST_CASE("psh check") {
    const Point x{cplx(0.4, -0.2)};
    const double r = 0.1;
    auto h = psh_check(pfield1([](cplx z) { return z.real(); }), x, 8, r);
    CHECK(h.ok);
    CHECK(std::abs(h.worst_margin) < 1e-12);
    auto s = psh_check(pfield1([](cplx z) { return std::norm(z); }), x, 8, r);
    CHECK(s.ok);
    CHECK(s.worst_margin > 0.0);
    auto v = psh_check(pfield1([](cplx z) { return -std::norm(z); }), x, 8, r);
    CHECK_FALSE(v.ok);
    CHECK(v.worst_margin == doctest::Approx(-r * r).epsilon(1e-9));
    auto m = psh_check([](const Point& p) { return std::log(std::abs(p[0]) + std::abs(p[1])); },
                       {cplx(1, 0), cplx(0.5, 0.5)}, 8, 0.05);
    CHECK(m.ok);
    CHECK(m.discs == 8);
}

TEST_CASE("lelong numbers") {
    const std::vector<double> radii{1e-2, 1e-3, 1e-4, 1e-5};
    CHECK(lelong_number(pfield1(log_abs), {cplx(0, 0)}, radii) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(lelong_number(pfield1([](cplx z) { return 3 * log_abs(z); }), {cplx(0, 0)}, radii) ==
          doctest::Approx(3.0).epsilon(1e-2));
    CHECK(lelong_number(pfield1([](cplx z) { return std::cos(z.real()); }), {cplx(0, 0)}, radii) < 1e-2);
    CHECK(lelong_number(pfield1([](cplx) { return kNegInf; }), {cplx(0, 0)}, radii) == kPosInf);
    CHECK(lelong_number([](const Point& p) { return std::log(std::norm(p[0]) + std::norm(p[1])); },
                        {cplx(0, 0), cplx(0, 0)}, radii) == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("chain check") {
    auto fam = make_disc_domain_family(0.0, 1.0, 1);
    ChainOptions co;
    co.inner = small_opts(3, 300);
    co.outer = small_opts(1, 15);
    co.outer.boundary_samples = 32;
    co.outer_family = make_disc_domain_family(0.0, 1.0, 1);
    co.inner.boundary_domain = co.outer.boundary_domain = DomainSpec::unit_ball(1);
    co.k_field = small_opts(1, 100);
    co.k_field->boundary_domain = DomainSpec::unit_ball(1);

    SUBCASE("empty weight") {
        auto r = chain_check(WeightField{}, fam, {cplx(0.3, 0.1)}, co);
        CHECK(r.ep_k == 0.0);
        CHECK(r.el == 0.0);
        CHECK(r.el_red == 0.0);
        CHECK(r.k == 0.0);
        CHECK(r.ordered);
    }
    SUBCASE("center at the support point") {
        WeightField a({{{cplx(0.2, 0.1)}, 1.0}});
        auto r = chain_check(a, fam, {cplx(0.2, 0.1)}, co);
        CHECK(r.ep_k == kNegInf);
        CHECK(r.el == kNegInf);
        CHECK(r.el_red == kNegInf);
        CHECK(r.k == kNegInf);
        CHECK(r.spread == 0.0);
    }
    SUBCASE("unit weight at 0 gives the Green function") {
        WeightField a({{{cplx(0, 0)}, 1.0}});
        auto r = chain_check(a, fam, {cplx(0.5, 0)}, co);
        const double g = std::log(0.5);
        CHECK(std::abs(r.el - g) < 5e-2);
        CHECK(std::abs(r.el_red - g) < 5e-2);
        CHECK(std::abs(r.k - g) < 5e-2);
        CHECK(std::abs(r.ep_k - g) < 5e-2);
        CHECK(r.ordered);
        CHECK(r.poisson_below);
        CHECK(r.spread <= 5e-2);
    }
}

TEST_CASE("field grid export") {
    FieldGrid g;
    g.base = {cplx(0, 0)};
    g.re_min = -1;
    g.re_max = 1;
    g.im_min = 0;
    g.im_max = 1;
    g.n_re = 3;
    g.n_im = 2;
    g.functional = "test";
    g.fill(pfield1([](cplx z) { return z == cplx{} ? kNegInf : z.real(); }), 2);
    REQUIRE(g.values.size() == 6);
    const auto csv = g.to_csv();
    CHECK(csv.rfind("re, im, value\n", 0) == 0);
    CHECK(csv.find("0, 0, -inf\n") != std::string::npos);
    CHECK(csv.find("1, 1, 1\n") != std::string::npos);
    auto sc = g.sidecar();
    CHECK(sc["count"] == 6);
    CHECK(sc["schema_version"] == kSchemaVersion);
}
