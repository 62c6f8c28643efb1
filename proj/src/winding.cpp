#include "discenv/winding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "discenv/error.hpp"

namespace discenv {

namespace {
constexpr double kPi = std::numbers::pi;
}

Contour Contour::circle(cplx center, double radius) {
    return {[=](double s) { return center + std::polar(radius, 2.0 * kPi * s); }};
}

Contour Contour::annular_sector(double r_min, double r_max, double t0, double t1) {
    const double arc = t1 - t0;
    // Four pieces of equal parameter length: outer arc, inward edge, inner arc
    // backwards, outward edge.
    return {[=](double s) {
        const double q = 4.0 * s;
        if (q < 1.0) return std::polar(r_max, t0 + q * arc);
        if (q < 2.0) return std::polar(r_max + (q - 1.0) * (r_min - r_max), t1);
        if (q < 3.0) return std::polar(r_min, t1 - (q - 2.0) * arc);
        return std::polar(r_min + (q - 3.0) * (r_max - r_min), t0);
    }};
}

int winding_count(std::span<const cplx> values, double safety) {
    if (values.size() < 3) throw NumericError("winding_count needs at least three samples");
    double total = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        const cplx a = values[i], b = values[(i + 1) % values.size()];
        if (std::abs(a) < safety) throw NumericError("contour too close to zero set");
        const double d = std::arg(b / a);
        if (std::abs(d) > 0.75 * kPi) throw NumericError("winding_count: contour undersampled");
        total += d;
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

int winding_count(const std::function<cplx(cplx)>& h, const Contour& contour, int min_samples, double safety) {
    struct Sample {
        double s;
        cplx v;
    };
    std::vector<Sample> pts;
    pts.reserve(static_cast<size_t>(min_samples) + 1);
    double vmax = 0.0;
    for (int j = 0; j <= min_samples; ++j) {
        const double s = static_cast<double>(j) / min_samples;
        const cplx v = h(contour.point(j == min_samples ? 0.0 : s));
        vmax = std::max(vmax, std::abs(v));
        pts.push_back({s, v});
    }
    constexpr int kMaxDepth = 30;
    double total = 0.0;
    // Depth-first refinement of each coarse step.
    std::vector<std::pair<Sample, Sample>> stack;
    std::vector<int> depth;
    for (size_t j = 0; j + 1 < pts.size(); ++j) {
        stack.clear();
        depth.clear();
        stack.push_back({pts[j], pts[j + 1]});
        depth.push_back(0);
        while (!stack.empty()) {
            auto [a, b] = stack.back();
            const int d = depth.back();
            stack.pop_back();
            depth.pop_back();
            if (std::abs(a.v) < safety * vmax || std::abs(b.v) < safety * vmax || a.v == cplx{} || b.v == cplx{})
                throw NumericError("contour too close to zero set");
            const double turn = std::arg(b.v / a.v);
            if (std::abs(turn) <= 0.25 * kPi) {
                total += turn;
                continue;
            }
            if (d >= kMaxDepth) throw NumericError("contour too close to zero set");
            const double sm = 0.5 * (a.s + b.s);
            const cplx vm = h(contour.point(sm));
            vmax = std::max(vmax, std::abs(vm));
            const Sample m{sm, vm};
            // Push right half first so the left half is processed first.
            stack.push_back({m, b});
            depth.push_back(d + 1);
            stack.push_back({a, m});
            depth.push_back(d + 1);
        }
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

} // namespace discenv
