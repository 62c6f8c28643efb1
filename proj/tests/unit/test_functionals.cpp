#include <cmath>
#include <random>

#include "doctest.h"
#include "discenv/error.hpp"
#include "discenv/functionals.hpp"

using namespace discenv;

namespace {

ProjectiveDisc poly1(std::initializer_list<cplx> c) { return PolyDisc({ComplexPoly(c)}).to_projective(); }

ScalarField field1(std::function<double(cplx)> g) {
    return {1, [g](std::span<const cplx> z) { return g(z[0]); }, true, "test"};
}

const double log_half = std::log(0.5);

} // namespace

TEST_CASE("poisson examples") {
    auto f = poly1({cplx(0.3, 1), cplx(0.2, -0.5), 0.7});
    CHECK(poisson(constant_field(1, 2.5), f) == doctest::Approx(2.5).epsilon(1e-14));
    const cplx z0(1.5, -2.0);
    CHECK(std::abs(poisson(field1([](cplx z) { return z.real(); }), poly1({z0, cplx(0.4, 0.3)})) - z0.real()) < 1e-12);
    CHECK(std::abs(poisson(field1([](cplx z) { return std::log(std::abs(z)); }), poly1({-0.3, 1.0}))) < 1e-6);
}

TEST_CASE("poisson refines an isolated -inf sample") {
    // log|z - 1| along zeta: one node hits the singularity.
    const double m = poisson(field1([](cplx z) { return std::log(std::abs(z - 1.0)); }), poly1({0.0, 1.0}));
    CHECK(std::isfinite(m));
    CHECK(std::abs(m) < 2e-2);
}

TEST_CASE("riesz examples and identity") {
    auto re = field1([](cplx z) { return z.real(); });
    CHECK(std::abs(riesz(re, poly1({cplx(1, 1), 2.0}))) < 1e-12);
    CHECK(riesz(field1([](cplx z) { return std::log(std::abs(z)); }), poly1({0.0, 1.0})) == kNegInf);
    auto sq = field1([](cplx z) { return std::norm(z); });
    CHECK(riesz(sq, poly1({0.0, 1.0})) == doctest::Approx(-1.0).epsilon(1e-12));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 20; ++i) {
        auto f = poly1({cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
        CHECK(poisson(sq, f) + riesz(sq, f) == doctest::Approx(sq(f.center())).epsilon(1e-12));
    }
}

TEST_CASE("lelong examples") {
    WeightField none;
    CHECK(lelong(none, poly1({0.0, 1.0}), false) == 0.0);
    WeightField far({{{cplx(5.0)}, 1.0}});
    CHECK(lelong(far, poly1({0.0, 1.0}), false) == 0.0);

    const cplx y(0.7, 0.2), c(1.5, -0.5);
    WeightField at_y({{{y}, 1.0}});
    auto f = poly1({y - 0.5 * c, c}); // y + c (zeta - 0.5)
    CHECK(lelong(at_y, f, false) == doctest::Approx(log_half).epsilon(1e-10));

    WeightField at0({{{cplx(0.0)}, 1.0}});
    auto g = poly1({0.25, -1.0, 1.0}); // (zeta - 0.5)^2
    CHECK(lelong(at0, g, false) == doctest::Approx(2 * log_half).epsilon(1e-6));
    CHECK(lelong(at0, g, true) == doctest::Approx(log_half).epsilon(1e-6));

    CHECK(lelong(at_y, PolyDisc::constant({y}).to_projective(), false) == kNegInf);
    CHECK(lelong(at_y, PolyDisc::constant({cplx(3.0)}).to_projective(), false) == 0.0);
    CHECK(lelong(at0, poly1({0.0, 1.0}), false) == kNegInf);
}

TEST_CASE("k_functional examples") {
    WeightField far({{{cplx(5.0)}, 1.0}});
    CHECK(k_functional(far, poly1({0.0, 1.0})) == 0.0);
    WeightField w2({{{cplx(0.0)}, 2.0}});
    CHECK(k_functional(w2, poly1({-0.5, 1.0})) == doctest::Approx(2 * log_half).epsilon(1e-12));
    WeightField w1({{{cplx(0.3)}, 1.0}});
    CHECK(k_functional(w1, PolyDisc::constant({cplx(0.3)}).to_projective()) == kNegInf);
}

TEST_CASE("j_functional examples") {
    CHECK(j_functional(ProjectiveDisc({ComplexPoly::constant(1.0), ComplexPoly({1.0, 2.0, 3.0})})) == 0.0);
    CHECK(j_functional(ProjectiveDisc({ComplexPoly({0.0, 1.0}), ComplexPoly::constant(1.0)})) == kPosInf);
    CHECK(j_functional(ProjectiveDisc({ComplexPoly({-0.5, 1.0}), ComplexPoly::constant(1.0)})) ==
          doctest::Approx(-log_half).epsilon(1e-12));
}

TEST_CASE("green_sum examples") {
    Divisor d{{{0.5, 1}}};
    std::vector<double> w{1.0};
    CHECK(std::abs(green_sum(d, w, 0.0) - log_half) < 1e-10);
    Divisor d0{{{0.0, 1}}};
    CHECK(green_sum(d0, w, cplx(0.3, 0.2)) == doctest::Approx(std::log(std::abs(cplx(0.3, 0.2)))).epsilon(1e-14));
    CHECK(green_sum(d0, w, 0.0) == kNegInf);
    Divisor many{{{cplx(0.3, 0.1), 2}, {cplx(-0.6, 0.5), 1}, {cplx(0.0, -0.9), 1}}};
    std::vector<double> ws{1.0, 2.5, 0.5};
    auto grid = circle_grid(512);
    std::vector<double> out(512);
    green_sum(many, ws, grid->re, grid->im, out);
    for (int j = 0; j < 512; ++j) {
        CHECK(std::abs(out[j]) < 1e-10);
        CHECK(std::abs(green_sum(many, ws, grid->node(j))) < 1e-10);
    }
}

TEST_CASE("green_sum is nonpositive and subharmonic") {
    Divisor d{{{cplx(0.3, 0.1), 1}, {cplx(-0.6, 0.5), 1}}};
    std::vector<double> w{1.0, 0.7};
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    int tested = 0;
    while (tested < 50) {
        const cplx z(u(rng), u(rng));
        if (std::abs(z) > 0.95) continue;
        double sep = 0.99 - std::abs(z);
        for (const auto& p : d.points) sep = std::min(sep, std::abs(z - p.z));
        if (sep < 1e-3) continue;
        const double r = 0.5 * sep;
        const double v = green_sum(d, w, z);
        CHECK(v <= 0.0);
        const double mean = circle_mean([&](cplx e) { return green_sum(d, w, z + r * e); }, 256);
        CHECK(v <= mean + 1e-12);
        ++tested;
    }
}

TEST_CASE("Green sum at 0 equals the Lelong functional") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int i = 0; i < 30; ++i) {
        WeightField alpha({{{cplx(u(rng), u(rng))}, 1.0 + u(rng)}, {{cplx(u(rng), u(rng))}, 0.5}});
        auto f = poly1({cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
        Divisor d;
        std::vector<double> w;
        lelong_divisor(alpha, f, false, d, w);
        const double l = lelong(alpha, f, false), lr = lelong(alpha, f, true), k = k_functional(alpha, f);
        CHECK(green_sum(d, w, 0.0) == doctest::Approx(l).epsilon(1e-12));
        CHECK(l <= lr + 1e-12);
        CHECK(lr <= k + 1e-12);
        CHECK(k <= 0.0);
    }
}

TEST_CASE("J is nonnegative and rotation invariant") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int i = 0; i < 30; ++i) {
        ProjectiveDisc f({ComplexPoly::from_roots(std::vector<cplx>{cplx(u(rng), u(rng)), cplx(u(rng), u(rng))}),
                          ComplexPoly({cplx(u(rng), u(rng)), 1.0}), ComplexPoly({1.0, cplx(u(rng), u(rng))})});
        const double j = j_functional(f);
        CHECK(j >= 0.0);
        CHECK(j_functional(f.rotated(1.3)) == doctest::Approx(j).epsilon(1e-10));
    }
}

TEST_CASE("weight field validation") {
    CHECK_THROWS_AS(WeightField({{{cplx(0.0)}, -1.0}}), ValidationError);
    CHECK_THROWS_AS(WeightField({{{cplx(0.0)}, 1.0}, {{cplx(0.0)}, 2.0}}), ValidationError);
    WeightField a({{{cplx(0.5)}, 2.0}});
    CHECK(a(Point{cplx(0.5)}) == 2.0);
    CHECK(a(Point{cplx(0.4)}) == 0.0);
}
