#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "discenv/error.hpp"
#include "discenv/singular_models.hpp"

using namespace discenv;

namespace {

const cplx w1 = std::polar(1.0, 2 * std::numbers::pi / 3);
const cplx w2 = std::conj(w1);

PolyDisc param_disc(std::vector<cplx> c) { return PolyDisc({ComplexPoly(std::move(c))}); }

EnvelopeOptions opts(int restarts, int evals, int samples = 256) {
    EnvelopeOptions o;
    o.optimizer.restarts = restarts;
    o.optimizer.max_evals = evals;
    o.boundary_samples = samples;
    return o;
}

} // namespace

TEST_CASE("normalize_point examples") {
    auto nodal = nodal_model();
    auto pre = normalize_point(nodal, {1.0, -1.0});
    REQUIRE(pre.size() == 2);
    CHECK(std::abs(pre[0] - w1) < 1e-12);
    CHECK(std::abs(pre[1] - w2) < 1e-12);
    auto half = normalize_point(nodal, {0.125, 0.75});
    REQUIRE(half.size() == 1);
    CHECK(std::abs(half[0] - 0.5) < 1e-12);
    auto cusp = normalize_point(cusp_model(), {0.0, 0.0});
    REQUIRE(cusp.size() == 1);
    CHECK(std::abs(cusp[0]) < 1e-12);
    CHECK_THROWS_AS(normalize_point(cusp_model(), {1.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(normalize_point(nodal, nodal.eval(3.5)), ValidationError);
}

TEST_CASE("normalize_point inverts the map on random parameters") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1, 1);
    for (const auto& m : {nodal_model(), cusp_model()}) {
        for (int i = 0; i < 500; ++i) {
            cplx t;
            do t = cplx(2.9 * d(rng), 2.9 * d(rng));
            while (std::abs(t) >= 2.9 || std::abs(t - w1) < 1e-3 || std::abs(t - w2) < 1e-3 || std::abs(t) < 1e-3);
            auto pre = normalize_point(m, m.eval(t));
            REQUIRE(pre.size() == 1);
            CHECK(std::abs(pre[0] - t) < 1e-9 * std::max(1.0, std::abs(t)));
        }
    }
}

TEST_CASE("models are injective off the singular fiber") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> d(-2.9, 2.9);
    auto m = nodal_model();
    int tested = 0;
    while (tested < 200) {
        const cplx a(d(rng), d(rng)), b(d(rng), d(rng));
        if (std::abs(a) >= 2.9 || std::abs(b) >= 2.9 || std::abs(a - b) < 1e-3) continue;
        const Point fa = m.eval(a), fb = m.eval(b);
        CHECK(std::abs(fa[0] - fb[0]) + std::abs(fa[1] - fb[1]) > 1e-9);
        ++tested;
    }
    const Point p = m.eval(w1), q = m.eval(w2);
    CHECK(std::abs(p[0] - 1.0) < 1e-12);
    CHECK(std::abs(p[1] + 1.0) < 1e-12);
    CHECK(std::abs(q[0] - p[0]) + std::abs(q[1] - p[1]) < 1e-12);
}

TEST_CASE("lift_disc round trips") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> d(-1, 1);
    for (const auto& m : {nodal_model(), cusp_model()}) {
        for (int i = 0; i < 20; ++i) {
            const int deg = 1 + i % 5;
            std::vector<cplx> c{cplx(d(rng), d(rng))};
            for (int k = 1; k <= deg; ++k) c.push_back(cplx(d(rng), d(rng)) * (0.9 / deg));
            const PolyDisc h = param_disc(c);
            const PolyDisc back = lift_disc(m, pushforward(m, h));
            for (int k = 0; k <= deg; ++k) CHECK(std::abs(back.coords[0].coeff(k) - c[k]) < 1e-8);
            CHECK(back.coords[0].degree() == deg);
        }
    }
}

TEST_CASE("lift_disc through the double point follows the chosen branch") {
    auto m = nodal_model();
    for (cplx w : {w1, w2}) {
        const PolyDisc h = param_disc({w, 0.7, cplx(0.1, 0.2)});
        const PolyDisc back = lift_disc(m, pushforward(m, h));
        CHECK(std::abs(back.coords[0](0.0) - w) < 1e-8);
    }
    // Boundary circle crossing the double point.
    const PolyDisc h = param_disc({w1 - 0.8, 0.8});
    CHECK(std::abs(lift_disc(m, pushforward(m, h)).coords[0].coeff(1) - 0.8) < 1e-8);
    const PolyDisc c = lift_disc(m, PolyDisc::constant({0.125, 0.75}));
    CHECK(c.coords[0].degree() == 0);
    CHECK(std::abs(c.coords[0](0.0) - 0.5) < 1e-12);
    CHECK_THROWS_AS(lift_disc(m, PolyDisc::constant({1.0, -1.0})), ValidationError);
}

TEST_CASE("pushforward of projective parameter discs") {
    auto cusp = cusp_model();
    const ProjectiveDisc h = blaschke_line_disc({2.0}, 1.0);
    const ProjectiveDisc f = pushforward(cusp, h);
    const Point c = f.center();
    CHECK(std::abs(c[0] - 4.0) < 1e-12);
    CHECK(std::abs(c[1] - 8.0) < 1e-12);
    const auto d = infinity_divisor(f);
    REQUIRE(d.points.size() == 1);
    CHECK(d.points[0].mult == 3);
    CHECK(std::abs(std::abs(d.points[0].z) - 0.5) < 1e-9);
}

TEST_CASE("counterexample construction") {
    auto d = build_counterexample({});
    const double s3 = std::sqrt(3.0);
    CHECK(d.v(d.omega1) == doctest::Approx(-8 - 0.2 * s3).epsilon(1e-12));
    CHECK(d.v(d.omega2) == doctest::Approx(-8 + 0.2 * s3).epsilon(1e-12));
    CHECK(std::abs(d.vA(d.omega1) - d.vA(d.omega2)) < 1e-12);
    CHECK(d.predicted_gap() == doctest::Approx(0.4 * s3));
    CHECK(d.v(std::polar(3.0, 0.7)) == doctest::Approx(0.0).epsilon(1e-12));

    CounterexampleConstants sym;
    sym.c1 = 0.0;
    try {
        build_counterexample(sym);
        FAIL("expected rejection");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("v(omega1) != v(omega2)") != std::string::npos);
    }
    CounterexampleConstants bad_b;
    bad_b.b = 0.3;
    try {
        build_counterexample(bad_b);
        FAIL("expected rejection");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("(v+A)(omega1) = (v+A)(omega2)") != std::string::npos);
    }
    CounterexampleConstants high_c;
    high_c.c = 0.5;
    CHECK_THROWS_AS(build_counterexample(high_c), ValidationError);
    CounterexampleConstants concave;
    concave.c0 = -1.0;
    CHECK_THROWS_AS(build_counterexample(concave), ValidationError);
    CHECK_NOTHROW(build_counterexample(sym, true));
}

TEST_CASE("counterexample envelope gap") {
    CounterexampleOptions co;
    co.envelope = opts(2, 400);
    co.interior_points = 4;
    co.regular_points = {{0.5, 0.0}, {-1.5, 0.3}};
    co.grid_n = 4;
    co.threads = 1;
    SUBCASE("reference constants") {
        auto d = build_counterexample({});
        auto r = counterexample_envelope_gap(d, co);
        const double lo = std::min(-d.A(d.omega1), -d.A(d.omega2));
        CHECK(std::abs(r.ep_at_p - lo) < 5e-2);
        CHECK(std::abs(r.ep_at_p_joint - r.ep_at_p) < 1e-2);
        CHECK(std::abs(r.gap - 0.4 * std::sqrt(3.0)) < 5e-2);
        CHECK_FALSE(r.usc_ok_at_p);
        CHECK(std::abs(r.riesz_gap - r.gap) < 5e-2);
        for (const auto& c : r.interior) CHECK(c.ok);
        for (const auto& c : r.usc_regular) CHECK(c.ok);
        for (const auto& c : r.psh_regular) CHECK(c.ok);
        CHECK(r.field.values.size() == 16);
        CHECK(r.to_json().contains("psh_check_at_regular_points"));
    }
    SUBCASE("symmetric constants give no gap") {
        CounterexampleConstants k;
        k.c1 = 0.0;
        k.b = 0.0;
        auto r = counterexample_envelope_gap(build_counterexample(k, true), co);
        CHECK(std::abs(r.gap) < 5e-2);
        CHECK(r.usc_ok_at_p);
    }
}

TEST_CASE("lelong counterexample") {
    auto o = opts(2, 400);
    auto r = lelong_counterexample(WeightField({{{cplx(0, 0.5)}, 1.0}}), 1, o);
    CHECK(std::abs(r.oracle_at_omega[0] - r.oracle_at_omega[1]) > 1e-2);
    for (int j = 0; j < 2; ++j) CHECK(std::abs(r.el_at_omega[j] - r.oracle_at_omega[j]) < 5e-2);
    CHECK(r.gap > 0.0);
    CHECK(r.el_at_p == std::min(r.el_at_omega[0], r.el_at_omega[1]));
    CHECK_THROWS_AS(lelong_counterexample(WeightField({{{cplx(0.5, 0)}, 1.0}}), 1, o), ValidationError);
    CHECK_THROWS_AS(lelong_counterexample(WeightField({{{w1}, 1.0}}), 1, o), ValidationError);
    auto e = lelong_counterexample(WeightField{}, 1, o);
    CHECK(e.gap == 0.0);
}
