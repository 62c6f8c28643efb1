#include "discenv/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "discenv/error.hpp"

namespace discenv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr int kPrimes[] = {2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
                           59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
                           137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
                           227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};

double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

// Objective in normalized coordinates u in [0,1]^d with counting.
class Scaled {
public:
    Scaled(const Objective& f, const std::vector<Bounds>& box) : f_(f), box_(box), x_(box.size()) {}

    double operator()(std::span<const double> u) {
        for (size_t i = 0; i < u.size(); ++i) {
            const double c = std::clamp(u[i], 0.0, 1.0);
            x_[i] = box_[i].lo + c * (box_[i].hi - box_[i].lo);
        }
        ++evals;
        const double v = f_(x_);
        return std::isnan(v) ? kInf : v;
    }

    std::vector<double> to_box(std::span<const double> u) const {
        std::vector<double> x(u.size());
        for (size_t i = 0; i < u.size(); ++i)
            x[i] = box_[i].lo + std::clamp(u[i], 0.0, 1.0) * (box_[i].hi - box_[i].lo);
        return x;
    }

    std::vector<double> to_unit(std::span<const double> x) const {
        std::vector<double> u(x.size());
        for (size_t i = 0; i < x.size(); ++i) {
            const double w = box_[i].hi - box_[i].lo;
            u[i] = w > 0.0 ? std::clamp((x[i] - box_[i].lo) / w, 0.0, 1.0) : 0.0;
        }
        return u;
    }

    long evals = 0;

private:
    const Objective& f_;
    const std::vector<Bounds>& box_;
    std::vector<double> x_;
};

struct Point {
    std::vector<double> u;
    double f;
};

// Adaptive Nelder-Mead (Gao-Han coefficients) in the unit cube.
Point nelder_mead(Scaled& obj, Point start, double step, long budget, double tol, double stop_at) {
    const size_t d = start.u.size();
    const double dd = static_cast<double>(d);
    const double alpha = 1.0, beta = 1.0 + 2.0 / dd, gamma = 0.75 - 0.5 / dd, delta = 1.0 - 1.0 / dd;
    const long limit = obj.evals + budget;

    std::vector<Point> s;
    s.reserve(d + 1);
    s.push_back(start);
    for (size_t i = 0; i < d && obj.evals < limit; ++i) {
        Point p = start;
        p.u[i] += (p.u[i] + step <= 1.0) ? step : -step;
        p.f = obj(p.u);
        s.push_back(std::move(p));
    }
    if (s.size() < d + 1) {
        auto best = std::min_element(s.begin(), s.end(), [](const Point& a, const Point& b) { return a.f < b.f; });
        return *best;
    }
    auto by_value = [](const Point& a, const Point& b) { return a.f < b.f; };
    std::vector<double> c(d), xr(d), xe(d), xc(d);
    auto clamp_u = [](std::vector<double>& u) {
        for (auto& v : u) v = std::clamp(v, 0.0, 1.0);
    };

    while (obj.evals < limit) {
        std::stable_sort(s.begin(), s.end(), by_value);
        if (s[0].f <= stop_at) break;
        double spread = 0.0, size = 0.0;
        for (size_t i = 1; i <= d; ++i) {
            spread = std::max(spread, std::abs(s[i].f - s[0].f));
            for (size_t k = 0; k < d; ++k) size = std::max(size, std::abs(s[i].u[k] - s[0].u[k]));
        }
        if (std::isfinite(s[d].f) && spread <= tol * (1.0 + std::abs(s[0].f)) && size <= tol) break;
        if (size <= 1e-14) break;

        std::fill(c.begin(), c.end(), 0.0);
        for (size_t i = 0; i < d; ++i)
            for (size_t k = 0; k < d; ++k) c[k] += s[i].u[k] / dd;
        for (size_t k = 0; k < d; ++k) xr[k] = c[k] + alpha * (c[k] - s[d].u[k]);
        clamp_u(xr);
        const double fr = obj(xr);
        if (fr < s[0].f) {
            for (size_t k = 0; k < d; ++k) xe[k] = c[k] + beta * (xr[k] - c[k]);
            clamp_u(xe);
            const double fe = obj(xe);
            if (fe < fr) s[d] = {xe, fe};
            else s[d] = {xr, fr};
            continue;
        }
        if (fr < s[d - 1].f) {
            s[d] = {xr, fr};
            continue;
        }
        const bool outside = fr < s[d].f;
        for (size_t k = 0; k < d; ++k)
            xc[k] = outside ? c[k] + gamma * (xr[k] - c[k]) : c[k] - gamma * (c[k] - s[d].u[k]);
        clamp_u(xc);
        const double fc = obj(xc);
        if (fc < (outside ? fr : s[d].f)) {
            s[d] = {xc, fc};
            continue;
        }
        for (size_t i = 1; i <= d && obj.evals < limit; ++i) {
            for (size_t k = 0; k < d; ++k) s[i].u[k] = s[0].u[k] + delta * (s[i].u[k] - s[0].u[k]);
            s[i].f = obj(s[i].u);
        }
    }
    return *std::min_element(s.begin(), s.end(), by_value);
}

} // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) noexcept {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

std::vector<double> quasi_random_point(const std::vector<Bounds>& box, std::uint64_t seed, std::uint64_t index) {
    std::uint64_t st = seed ^ 0x5DEECE66DULL;
    std::vector<double> x(box.size());
    constexpr size_t nprimes = sizeof(kPrimes) / sizeof(kPrimes[0]);
    for (size_t i = 0; i < box.size(); ++i) {
        const double shift = uniform01(st);
        double u;
        if (i < nprimes) {
            u = radical_inverse(index + 1, kPrimes[i]) + shift;
            u -= std::floor(u);
        } else {
            std::uint64_t s2 = seed + 0x632BE59BD9B4E019ULL * (index + 1) + i;
            u = uniform01(s2);
        }
        x[i] = box[i].lo + u * (box[i].hi - box[i].lo);
    }
    return x;
}

MinimizeResult minimize(const Objective& f, const OptimizerConfig& cfg, std::span<const std::vector<double>> warm_starts,
                        std::optional<double> lower_bound) {
    if (cfg.box.empty()) throw ValidationError("box", "optimizer box is empty");
    for (const auto& b : cfg.box)
        if (!(b.hi >= b.lo)) throw ValidationError("box", "optimizer box has hi < lo");
    if (cfg.max_evals < 1 || cfg.restarts < 0) throw ValidationError("config", "invalid optimizer budget");

    Scaled obj(f, cfg.box);
    const double stop_at = lower_bound.value_or(-kInf);
    Point best{{}, kInf};

    auto run_start = [&](std::vector<double> u0, double step) {
        const long limit = obj.evals + cfg.max_evals;
        Point cur{u0, obj(u0)};
        if (cur.f < best.f || best.u.empty()) best = cur;
        if (cur.f <= stop_at) return;
        double s = step;
        for (int round = 0; round < 6 && obj.evals < limit; ++round) {
            Point next = nelder_mead(obj, cur, s, limit - obj.evals, cfg.tolerance, stop_at);
            const double gain = cur.f - next.f;
            const bool improved = next.f < cur.f;
            if (improved) cur = std::move(next);
            if (cur.f < best.f) best = cur;
            if (cur.f <= stop_at) return;
            if (!improved || (std::isfinite(gain) && gain <= cfg.tolerance * (1.0 + std::abs(cur.f)))) {
                if (round > 0) break;
            }
            s = std::max(0.5 * s, 1e-3);
        }
    };

    for (const auto& w : warm_starts) {
        if (w.size() != cfg.box.size()) throw ValidationError("warm_start", "dimension mismatch");
        run_start(obj.to_unit(w), 0.05);
        if (best.f <= stop_at) break;
    }
    for (int r = 0; r < cfg.restarts && best.f > stop_at; ++r) {
        auto x = quasi_random_point(cfg.box, cfg.seed, static_cast<std::uint64_t>(r));
        run_start(obj.to_unit(x), 0.1);
    }
    if (best.u.empty() || !(best.f < kInf)) throw NumericError("infeasible family");
    return {obj.to_box(best.u), best.f, obj.evals};
}

} // namespace discenv
