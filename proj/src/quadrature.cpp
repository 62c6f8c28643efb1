#include "discenv/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "discenv/error.hpp"
#include "discenv/kernels.hpp"

namespace discenv {

double CircleGrid::angle(int j) const { return (2.0 * std::numbers::pi * j + phase) / n; }

std::shared_ptr<const CircleGrid> circle_grid(int n, double phase) {
    if (n < 1) throw ValidationError("n", "circle grid needs at least one node");
    static std::mutex mu;
    static std::map<std::pair<int, double>, std::shared_ptr<const CircleGrid>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{n, phase}];
    if (!slot) {
        auto g = std::make_shared<CircleGrid>();
        g->n = n;
        g->phase = phase;
        g->re.resize(n);
        g->im.resize(n);
        for (int j = 0; j < n; ++j) {
            const double t = (2.0 * std::numbers::pi * j + phase) / n;
            g->re[j] = std::cos(t);
            g->im[j] = std::sin(t);
        }
        slot = std::move(g);
    }
    return slot;
}

double circle_mean_samples(std::span<const double> samples) {
    for (double s : samples)
        if (s == -std::numeric_limits<double>::infinity()) return s;
    return simd::sum(samples) / static_cast<double>(samples.size());
}

double circle_mean(const std::function<double(cplx)>& g, int n) {
    if (n < 8) throw ValidationError("n", "circle_mean needs at least 8 nodes");
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    auto grid = circle_grid(n);
    std::vector<double> v(n);
    int hits = 0;
    for (int j = 0; j < n; ++j) {
        v[j] = g(grid->node(j));
        if (v[j] == kNegInf) ++hits;
    }
    if (hits == 0) return simd::sum(v) / n;
    if (hits > 1) return kNegInf;
    // Isolated singular node: double the resolution on a grid shifted off the
    // original nodes.
    auto fine = circle_grid(2 * n, std::numbers::pi);
    std::vector<double> w(2 * n);
    for (int j = 0; j < 2 * n; ++j) {
        w[j] = g(fine->node(j));
        if (w[j] == kNegInf) return kNegInf;
    }
    return simd::sum(w) / (2.0 * n);
}

double arc_integral(const std::function<double(cplx)>& g, double t0, double t1, int panels) {
    // 5-point Gauss-Legendre on each panel.
    static constexpr double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                    0.9061798459386640};
    static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                    0.2369268850561891, 0.2369268850561891};
    const double h = (t1 - t0) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = t0 + (p + 0.5) * h;
        for (int q = 0; q < 5; ++q) {
            const double t = mid + 0.5 * h * x[q];
            acc += w[q] * 0.5 * h * g(std::polar(1.0, t));
        }
    }
    return acc / (2.0 * std::numbers::pi);
}

} // namespace discenv
