#include "discenv/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "discenv/error.hpp"

namespace discenv {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Evaluation {
    cplx newton;       // p / p'
    double log_abs_p;  // log |p(z)|
    double log_bound;  // log of the rounding error bound of p(z)
};

// Newton correction p/p' and residual data; the reversed polynomial is used
// outside the unit disc so that large |z| does not overflow.
Evaluation evaluate(const std::vector<cplx>& a, cplx z) {
    const int n = static_cast<int>(a.size()) - 1;
    const double az = std::abs(z);
    Evaluation e{};
    if (az <= 1.0) {
        cplx p = a[n], dp{};
        double bound = std::abs(a[n]);
        for (int k = n - 1; k >= 0; --k) {
            dp = dp * z + p;
            p = p * z + a[k];
            bound = bound * az + std::abs(a[k]);
        }
        e.newton = dp == cplx{} ? cplx{} : p / dp;
        e.log_abs_p = std::log(std::abs(p));
        e.log_bound = std::log(4.0 * (n + 1) * kEps * bound);
        if (dp == cplx{} && p != cplx{}) e.newton = cplx{kEps * (1.0 + az), 0.0};
    } else {
        const cplx w = 1.0 / z;
        const double aw = 1.0 / az;
        cplx q = a[0], dq{};
        double bound = std::abs(a[0]);
        for (int k = 1; k <= n; ++k) {
            dq = dq * w + q;
            q = q * w + a[k];
            bound = bound * aw + std::abs(a[k]);
        }
        // p(z) = z^n q(w); p'/p = w (n - w q'/q)
        const cplx ratio = w * (static_cast<double>(n) - w * dq / q);
        e.newton = ratio == cplx{} ? cplx{} : 1.0 / ratio;
        const double logz = n * std::log(az);
        e.log_abs_p = logz + std::log(std::abs(q));
        e.log_bound = logz + std::log(4.0 * (n + 1) * kEps * bound);
    }
    return e;
}

// Initial approximations on circles given by the upper convex hull of
// (k, log|a_k|), one circle per hull edge.
std::vector<cplx> initial_guesses(const std::vector<cplx>& a) {
    const int n = static_cast<int>(a.size()) - 1;
    std::vector<int> hull;
    std::vector<double> la(n + 1);
    for (int k = 0; k <= n; ++k)
        la[k] = a[k] == cplx{} ? -std::numeric_limits<double>::infinity() : std::log(std::abs(a[k]));
    for (int k = 0; k <= n; ++k) {
        if (!std::isfinite(la[k])) continue;
        while (hull.size() >= 2) {
            const int i = hull[hull.size() - 2], j = hull.back();
            // keep j only if it lies strictly above segment i-k
            const double cross = (j - i) * (la[k] - la[i]) - (k - i) * (la[j] - la[i]);
            if (cross >= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(k);
    }
    std::vector<cplx> z;
    z.reserve(n);
    constexpr double kSigma = 0.7;
    for (size_t h = 0; h + 1 < hull.size(); ++h) {
        const int i = hull[h], j = hull[h + 1];
        const int m = j - i;
        const double radius = std::exp((la[i] - la[j]) / m);
        for (int q = 0; q < m; ++q) {
            const double ang = 2.0 * std::numbers::pi * q / m + 2.0 * std::numbers::pi * i / n + kSigma;
            z.push_back(std::polar(radius, ang));
        }
    }
    return z;
}

int find(std::vector<int>& parent, int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
}

} // namespace

RootSet poly_roots(const ComplexPoly& p, const RootOptions& opts) {
    if (p.is_zero()) throw ValidationError("p", "undefined root set");
    RootSet out;
    const auto& all = p.coeffs();
    int zeros = 0;
    while (all[zeros] == cplx{}) ++zeros;
    if (zeros > 0) out.roots.push_back({cplx{}, zeros});
    std::vector<cplx> a(all.begin() + zeros, all.end());
    const int n = static_cast<int>(a.size()) - 1;
    if (n == 0) return out;
    if (n == 1) {
        out.roots.push_back({-a[0] / a[1], 1});
        return out;
    }

    std::vector<cplx> z = initial_guesses(a);
    std::vector<bool> done(n, false);
    std::vector<Evaluation> ev(n);
    int active = n;
    for (int it = 0; it < opts.max_iterations && active > 0; ++it) {
        for (int i = 0; i < n; ++i) {
            if (done[i]) continue;
            ev[i] = evaluate(a, z[i]);
            if (ev[i].log_abs_p <= ev[i].log_bound || !std::isfinite(ev[i].log_abs_p)) {
                done[i] = true;
                --active;
                continue;
            }
            cplx s{};
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            const cplx nw = ev[i].newton;
            const cplx corr = nw / (1.0 - nw * s);
            z[i] -= corr;
            if (std::abs(corr) <= kEps * std::abs(z[i])) {
                done[i] = true;
                --active;
            }
        }
    }
    for (int i = 0; i < n; ++i) ev[i] = evaluate(a, z[i]);

    // Non-convergence check: residual far above rounding level.
    std::vector<double> bad;
    for (int i = 0; i < n; ++i)
        if (ev[i].log_abs_p > ev[i].log_bound + std::log(1e6)) bad.push_back(std::exp(ev[i].log_abs_p));
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "root iteration did not converge; residuals:";
        for (double r : bad) msg << ' ' << r;
        throw NumericError(msg.str());
    }

    // Inclusion radii r_i = n |p(z_i)| / |a_n prod (z_i - z_j)|, inflated by
    // the rounding bound of p(z_i).
    std::vector<double> radius(n);
    const double log_lead = std::log(std::abs(a[n]));
    for (int i = 0; i < n; ++i) {
        double lp = std::max(ev[i].log_abs_p, ev[i].log_bound);
        double ld = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) ld += std::log(std::max(std::abs(z[i] - z[j]), std::numeric_limits<double>::min()));
        radius[i] = std::exp(std::log(static_cast<double>(n)) + lp - log_lead - ld);
    }
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = std::abs(z[i] - z[j]);
            const double tol = opts.cluster_tol * std::max({1.0, std::abs(z[i]), std::abs(z[j])});
            if (d <= radius[i] + radius[j] || d <= tol) parent[find(parent, i)] = find(parent, j);
        }
    std::vector<int> order;
    for (int i = 0; i < n; ++i)
        if (find(parent, i) == i) order.push_back(i);
    for (int rep : order) {
        cplx sum{};
        int count = 0;
        for (int i = 0; i < n; ++i)
            if (find(parent, i) == rep) {
                sum += z[i];
                ++count;
            }
        cplx c = sum / static_cast<double>(count);
        if (count > 1) {
            // A root of multiplicity m is a simple root of p^(m-1).
            ComplexPoly q(std::vector<cplx>(a.begin(), a.end()));
            for (int k = 1; k < count; ++k) q = q.derivative();
            const ComplexPoly dq = q.derivative();
            double spread = 0.0;
            for (int i = 0; i < n; ++i)
                if (find(parent, i) == rep) spread = std::max(spread, std::abs(z[i] - c) + radius[i]);
            cplx t = c;
            for (int it = 0; it < 6; ++it) {
                const cplx d = dq(t);
                if (d == cplx{}) break;
                const cplx step = q(t) / d;
                t -= step;
                if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(t))) break;
            }
            if (std::abs(t - c) <= spread && std::abs(q(t)) <= std::abs(q(c))) c = t;
        }
        out.roots.push_back({c, count});
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const Root& x, const Root& y) {
        if (x.location.real() != y.location.real()) return x.location.real() < y.location.real();
        return x.location.imag() < y.location.imag();
    });
    return out;
}

} // namespace discenv
