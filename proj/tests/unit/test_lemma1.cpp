#include <cmath>
#include <numbers>

#include "doctest.h"
#include "discenv/error.hpp"
#include "discenv/lemma1.hpp"

using namespace discenv;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexPoly exp_taylor(double a, double b, int degree) {
    // a e^{b(z-1)} = a e^{-b} sum (b z)^n / n!
    std::vector<cplx> c;
    double term = a * std::exp(-b);
    for (int n = 0; n <= degree; ++n) {
        c.push_back(term);
        term *= b / (n + 1);
    }
    return ComplexPoly(c);
}

const AnnularSector kDisc{0.0, 1.0, 0.0, 2 * kPi};

} // namespace

TEST_CASE("arc sets") {
    ArcSet j({{-kPi / 4, kPi / 4}, {kPi / 2, kPi}});
    CHECK(j.normalized_length() == doctest::Approx(0.5));
    CHECK_THROWS_AS(ArcSet({{0.0, 1.0}, {0.5, 2.0}}), ValidationError);
    CHECK_THROWS_AS(ArcSet({{0.0, 1.0}, {-7.0, 0.5 - 2 * kPi}}), ValidationError);
    CHECK_THROWS_AS(ArcSet({{1.0, 1.0}}), ValidationError);
    CHECK_NOTHROW(ArcSet({{0.0, 1.0}, {1.5 - 2 * kPi, 2.0 - 2 * kPi}}));
}

TEST_CASE("solve_zk examples") {
    SUBCASE("constant zeta on the full disc") {
        const cplx a = std::polar(0.5, 0.3);
        const int k = 7;
        auto rs = solve_zk(ComplexPoly::constant(a), k, {kDisc});
        REQUIRE(rs.total_multiplicity() == k);
        for (const auto& r : rs.roots) {
            CHECK(std::abs(std::abs(r.location) - std::pow(0.5, 1.0 / k)) < 1e-12);
            CHECK(std::abs(std::pow(r.location, k) - a) < 1e-12);
        }
    }
    SUBCASE("right half plane") {
        const AnnularSector half{0.0, 1.0, -kPi / 2 + 1e-3, kPi / 2 - 1e-3};
        // Fourth roots of 0.5 sit at arguments 0, +-pi/2, pi: one lies strictly inside.
        CHECK(solve_zk(ComplexPoly::constant(0.5), 4, {half}).total_multiplicity() == 1);
        CHECK(solve_zk(ComplexPoly::constant(-0.5), 4, {half}).total_multiplicity() == 2);
    }
    SUBCASE("affine zeta, k = 8") {
        const ComplexPoly z{0.3, 0.1};
        CHECK(solve_zk(z, 8, {kDisc}).total_multiplicity() == 8);
        CHECK(count_zk_winding(z, 8, {{0.0, 0.99, 0.0, 2 * kPi}}) == 8);
    }
    SUBCASE("annular sector") {
        const ComplexPoly z{0.3, 0.1};
        auto rs = solve_zk(z, 40, {{0.9, 1.0, -0.5, 0.5}});
        CHECK(rs.total_multiplicity() == count_zk_winding(z, 40, {{0.9, 1.0, -0.5, 0.5}}));
        CHECK(rs.total_multiplicity() > 0);
    }
    CHECK_THROWS_AS(solve_zk(ComplexPoly::constant(1.5), 4, {kDisc}), ValidationError);
    CHECK_THROWS_AS(solve_zk(ComplexPoly{0.0, 0.5}, 4, {kDisc}), ValidationError);
    CHECK_THROWS_AS(solve_zk(ComplexPoly::constant(0.5), 513, {kDisc}), ValidationError);
    CHECK_THROWS_AS(solve_zk(ComplexPoly::constant(0.5), 0, {kDisc}), ValidationError);
    // Roots on the sector edge: the argument principle refuses the contour.
    CHECK_THROWS_AS(solve_zk(ComplexPoly::constant(0.5), 4, {{0.0, 1.0, 0.0, kPi / 2}}), NumericError);
    CHECK(count_zk_winding(ComplexPoly::constant(0.5), 1000, {kDisc}) == 1000);
}

TEST_CASE("lemma1_check examples") {
    const ArcSet j({{-kPi / 4, kPi / 4}});
    const auto u = arc_neighborhood(j, 0.0, 0.01);
    auto r = lemma1_check(ComplexPoly::constant(0.5), j, u, 100, 0.01);
    CHECK(r.solutions.total_multiplicity() == 25);
    CHECK(r.lhs == doctest::Approx(25 * std::log(0.5) / 100).epsilon(1e-10));
    CHECK(r.lhs == doctest::Approx(-0.1733).epsilon(1e-3));
    CHECK(r.rhs == doctest::Approx(0.25 * std::log(0.5) + 0.01).epsilon(1e-10));
    CHECK(r.rhs == doctest::Approx(-0.1633).epsilon(1e-3));
    CHECK(r.holds);
    CHECK(r.to_json()["count"] == 25);
    CHECK_NOTHROW(lemma1_check(ComplexPoly::constant(0.5), j, u, 4, 0.01));

    const ArcSet jt({{-0.3 * kPi, 0.3 * kPi}});
    CHECK(jt.normalized_length() == doctest::Approx(0.3));
    auto t = lemma1_check(exp_taylor(0.4, 0.2, 6), jt, arc_neighborhood(jt, 0.0, 0.01), 200, 0.02);
    CHECK(t.holds);
    CHECK(t.solutions.total_multiplicity() == t.winding);

    CHECK_THROWS_AS(lemma1_check(ComplexPoly::constant(0.5), j, {{0.0, 1.0, 0.0, 0.5}}, 10, 0.01), ValidationError);
}

TEST_CASE("constant case equidistribution") {
    const double a = 0.5;
    for (double len : {0.1, 0.25, 0.37}) {
        const ArcSet j({{-kPi * len, kPi * len}});
        for (int k : {13, 50, 101, 256}) {
            auto r = lemma1_check(ComplexPoly::constant(a), j, arc_neighborhood(j, 0.0, 1e-3), k, 0.0);
            const int n = r.solutions.total_multiplicity();
            CHECK(std::abs(n - k * len) <= 1.0 + 1e-3 * k / kPi);
            CHECK(std::abs(r.lhs - len * std::log(a) * n / (k * len)) <= std::abs(std::log(a)) / k + 1e-12);
        }
    }
}

TEST_CASE("monotone verdict in eps") {
    const ArcSet j({{-0.3 * kPi, 0.3 * kPi}});
    const auto u = arc_neighborhood(j, 0.0, 0.01);
    const auto z = exp_taylor(0.4, 0.2, 6);
    for (int k : {5, 17, 60}) {
        bool prev = false;
        for (double eps : {-0.05, -0.01, 0.0, 1e-4, 0.01, 0.05, 0.2}) {
            const bool h = lemma1_check(z, j, u, k, eps).holds;
            CHECK((!prev || h));
            prev = h;
        }
    }
}

TEST_CASE("threshold scans") {
    const ArcSet j({{-kPi / 4, kPi / 4}});
    const auto u = arc_neighborhood(j, 0.0, 0.01);
    std::vector<int> ks;
    for (int k = 1; k <= 512; ++k) ks.push_back(k);
    auto coarse = k_threshold_scan(ComplexPoly::constant(0.5), j, u, 0.05, ks, 0);
    REQUIRE(coarse.has_value());
    CHECK(*coarse <= 40);
    auto fine = k_threshold_scan(ComplexPoly::constant(0.5), j, u, 1e-4, ks, 0);
    CHECK((!fine.has_value() || *fine > *coarse));
    CHECK_THROWS_AS(k_threshold_scan(ComplexPoly::constant(0.5), j, u, 0.05, {4, 3}), ValidationError);
}
