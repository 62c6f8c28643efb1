#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "discenv/complex_poly.hpp"
#include "discenv/error.hpp"
#include "discenv/optimizer.hpp"
#include "discenv/quadrature.hpp"
#include "discenv/roots.hpp"
#include "discenv/winding.hpp"

using namespace discenv;
using std::numbers::pi;

namespace {

bool has_root(const RootSet& rs, cplx z, int mult, double tol = 1e-10) {
    for (const auto& r : rs.roots)
        if (std::abs(r.location - z) < tol && r.multiplicity == mult) return true;
    return false;
}

} // namespace

TEST_CASE("ComplexPoly basics") {
    ComplexPoly p({1.0, 2.0, 0.0, 0.0});
    CHECK(p.degree() == 1);
    CHECK(ComplexPoly().is_zero());
    CHECK(ComplexPoly().degree() == 0);
    ComplexPoly q({cplx(1, 2), cplx(-3, 0.5), cplx(0.25, -1), cplx(2, 2)});
    for (cplx z : {cplx(0.3, -0.7), cplx(-1.2, 0.4), cplx(2, 1)}) CHECK(std::abs(q(z) - q.eval_naive(z)) < 1e-12);
    auto shifted = q.taylor_shift(cplx(0.5, 0.5));
    CHECK(std::abs(shifted(cplx(0.1, 0.2)) - q(cplx(0.6, 0.7))) < 1e-12);
    auto sq = ComplexPoly({-1.0, 1.0}).pow(2);
    CHECK(sq.vanishing_order(1.0, 1e-12) == 2);
    CHECK(ComplexPoly({-1.0, 0.0, 1.0}) == ComplexPoly({-1.0, 0.0, 1.0}) * cplx(1.0));
}

TEST_CASE("poly_roots examples") {
    auto r1 = poly_roots(ComplexPoly({-1.0, 0.0, 1.0}));
    CHECK(r1.roots.size() == 2);
    CHECK(has_root(r1, 1.0, 1));
    CHECK(has_root(r1, -1.0, 1));

    auto r2 = poly_roots(ComplexPoly({0.0, 0.0, 1.0}));
    REQUIRE(r2.roots.size() == 1);
    CHECK(has_root(r2, 0.0, 2));

    auto r3 = poly_roots(ComplexPoly({-1.0, 0.0, 0.0, 1.0}));
    CHECK(r3.roots.size() == 3);
    CHECK(has_root(r3, 1.0, 1));
    CHECK(has_root(r3, std::polar(1.0, 2 * pi / 3), 1));
    CHECK(has_root(r3, std::polar(1.0, -2 * pi / 3), 1));

    CHECK_THROWS_AS(poly_roots(ComplexPoly()), ValidationError);
}

TEST_CASE("poly_roots clusters a multiple root") {
    std::vector<cplx> roots{cplx(0.3, 0.1), cplx(0.3, 0.1), cplx(0.3, 0.1), cplx(-0.5, 0.2)};
    auto rs = poly_roots(ComplexPoly::from_roots(roots));
    CHECK(rs.total_multiplicity() == 4);
    CHECK(has_root(rs, cplx(0.3, 0.1), 3, 1e-4));
}

TEST_CASE("poly_roots round trip on random separated roots") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 200; ++trial) {
        const int deg = 1 + static_cast<int>(rng() % 12);
        std::vector<cplx> roots;
        while (static_cast<int>(roots.size()) < deg) {
            cplx z(u(rng), u(rng));
            bool ok = true;
            for (auto w : roots) ok = ok && std::abs(w - z) >= 1e-3;
            if (ok) roots.push_back(z);
        }
        auto rs = poly_roots(ComplexPoly::from_roots(roots, cplx(0.7, -0.2)));
        REQUIRE(rs.total_multiplicity() == deg);
        for (auto z : roots) {
            double best = 1e300;
            for (const auto& r : rs.roots) best = std::min(best, std::abs(r.location - z));
            CHECK(best < 1e-8);
        }
    }
}

TEST_CASE("circle_mean examples") {
    CHECK(circle_mean([](cplx) { return 2.5; }) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(std::abs(circle_mean([](cplx z) { return z.real(); })) < 1e-12);
    CHECK(std::abs(circle_mean([](cplx z) { return std::log(std::abs(z - 0.3)); })) < 1e-6);
    // Exact on trigonometric polynomials of degree < n/2.
    const int n = 64;
    auto trig = [](cplx z) {
        const double t = std::arg(z);
        return 1.5 + std::cos(3 * t) - 0.5 * std::sin(17 * t) + 0.25 * std::cos(31 * t);
    };
    CHECK(std::abs(circle_mean(trig, n) - 1.5) < 1e-12);
    CHECK_THROWS_AS(circle_mean(trig, 4), ValidationError);
}

TEST_CASE("circle_mean handles -inf") {
    // log|z - 1| is -inf at the node z = 1 only; its mean is 0.
    const double m = circle_mean([](cplx z) { return std::log(std::abs(z - 1.0)); });
    CHECK(std::isfinite(m));
    CHECK(std::abs(m) < 2e-2);
    const double neg = circle_mean([](cplx z) {
        return z.real() > 0 ? -std::numeric_limits<double>::infinity() : 0.0;
    });
    CHECK(neg == -std::numeric_limits<double>::infinity());
}

TEST_CASE("winding_count examples") {
    auto circle = Contour::circle(0.0, 1.0);
    CHECK(winding_count([](cplx z) { return z; }, circle) == 1);
    CHECK(winding_count([](cplx z) { return z * z; }, circle) == 2);
    const cplx a(0.3, -0.4);
    for (int k = 1; k <= 20; ++k)
        CHECK(winding_count([&](cplx z) { return std::pow(z, k) - a; }, circle) == k);
    CHECK_THROWS_AS(winding_count([](cplx z) { return z - 1.0; }, circle), NumericError);
}

TEST_CASE("winding_count agrees with root counts inside circles") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<cplx> roots;
        for (int j = 0; j < 6; ++j) roots.emplace_back(u(rng), u(rng));
        ComplexPoly p = ComplexPoly::from_roots(roots);
        const double radius = 0.9;
        int inside = 0;
        bool close = false;
        for (auto z : roots) {
            inside += std::abs(z) < radius;
            close = close || std::abs(std::abs(z) - radius) < 1e-3;
        }
        if (close) continue;
        CHECK(winding_count([&](cplx z) { return p(z); }, Contour::circle(0.0, radius)) == inside);
    }
}

TEST_CASE("minimize examples") {
    OptimizerConfig cfg;
    cfg.box = {{-5.0, 5.0}};
    cfg.restarts = 2;
    auto r = minimize([](std::span<const double> x) { return (x[0] - 1) * (x[0] - 1); }, cfg);
    CHECK(r.value < 1e-10);
    CHECK(r.params[0] == doctest::Approx(1.0).epsilon(1e-4));

    OptimizerConfig c2;
    c2.box = {{-5.0, 5.0}, {-5.0, 5.0}};
    c2.restarts = 0;
    std::vector<std::vector<double>> warm{{3.0, 3.0}};
    auto sq = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
    auto r2 = minimize(sq, c2, warm);
    CHECK(r2.value < 1e-10);

    c2.restarts = 3;
    c2.seed = 99;
    auto a = minimize(sq, c2, warm);
    auto b = minimize(sq, c2, warm);
    CHECK(a.value == b.value);
    CHECK(a.params == b.params);
    CHECK(a.evals == b.evals);
}

TEST_CASE("minimize never exceeds the start values and is monotone in restarts") {
    auto rastrigin = [](std::span<const double> x) {
        double s = 10.0 * x.size();
        for (double v : x) s += v * v - 10.0 * std::cos(2 * pi * v);
        return s;
    };
    OptimizerConfig cfg;
    cfg.box = {{-4, 4}, {-4, 4}, {-4, 4}};
    cfg.max_evals = 300;
    cfg.seed = 2024;
    double prev = std::numeric_limits<double>::infinity();
    for (int r = 1; r <= 6; ++r) {
        cfg.restarts = r;
        auto res = minimize(rastrigin, cfg);
        for (int i = 0; i < r; ++i) CHECK(res.value <= rastrigin(quasi_random_point(cfg.box, cfg.seed, i)));
        CHECK(res.value <= prev);
        prev = res.value;
    }
}

TEST_CASE("minimize reports infeasible families") {
    OptimizerConfig cfg;
    cfg.box = {{0, 1}};
    cfg.restarts = 2;
    cfg.max_evals = 20;
    CHECK_THROWS_AS(minimize([](std::span<const double>) { return std::numeric_limits<double>::infinity(); }, cfg),
                    NumericError);
}
