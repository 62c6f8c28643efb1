#include "discenv/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <set>

#include "discenv/error.hpp"
#include "discenv/parallel.hpp"

namespace discenv {
namespace {

Point offset(const Point& x, const Point& v, cplx t) {
    Point p = x;
    for (size_t k = 0; k < p.size(); ++k) p[k] += t * v[k];
    return p;
}

} // namespace

Point unit_direction(int dim, std::uint64_t seed, std::uint64_t index) {
    std::uint64_t st = seed * 0x9E3779B97F4A7C15ULL + index * 0xD1B54A32D192ED03ULL + 1;
    Point v(dim);
    for (;;) {
        double s = 0.0;
        for (auto& c : v) {
            // Box-Muller pairs give rotation-invariant directions.
            const double u1 = std::max(uniform01(st), 1e-300), u2 = uniform01(st);
            const double r = std::sqrt(-2.0 * std::log(u1));
            c = {r * std::cos(2 * std::numbers::pi * u2), r * std::sin(2 * std::numbers::pi * u2)};
            s += std::norm(c);
        }
        if (s > 1e-12) {
            for (auto& c : v) c /= std::sqrt(s);
            return v;
        }
    }
}

double DiscFunctional::operator()(const ProjectiveDisc& f, int n) const {
    const double c = center_term ? center_term(f.center()) : 0.0;
    const double v = core(f, sample_boundary(f, *circle_grid(n)));
    return c + v;
}

DiscFunctional poisson_functional(const ScalarField& u, int n, bool guarded) {
    DiscFunctional h;
    h.name = "poisson";
    h.core = [u, n, guarded](const ProjectiveDisc& f, const BoundarySamples& s) {
        const double p = s.n == n ? poisson(u, f, s) : poisson(u, f, n);
        if (!guarded) return p;
        return std::max(p, poisson(u, f, sample_boundary(f, *circle_grid(n, std::numbers::pi))));
    };
    return h;
}

DiscFunctional riesz_functional(const ScalarField& u, int n, bool guarded) {
    DiscFunctional h = poisson_functional(negated(u), n, guarded);
    h.name = "riesz";
    h.center_term = [u](const Point& x) { return u(x); };
    return h;
}

DiscFunctional lelong_functional(const WeightField& alpha, bool reduced) {
    DiscFunctional h;
    h.name = reduced ? "lelong-reduced" : "lelong";
    h.core = [alpha, reduced](const ProjectiveDisc& f, const BoundarySamples&) { return lelong(alpha, f, reduced); };
    return h;
}

DiscFunctional k_disc_functional(const WeightField& alpha) {
    DiscFunctional h;
    h.name = "k";
    h.core = [alpha](const ProjectiveDisc& f, const BoundarySamples&) { return k_functional(alpha, f); };
    return h;
}

DiscFunctional j_disc_functional() {
    DiscFunctional h;
    h.name = "j";
    h.core = [](const ProjectiveDisc& f, const BoundarySamples&) { return j_functional(f); };
    h.lower_bound = 0.0;
    return h;
}

bool is_functional_name(const std::string& s) {
    return s == "poisson" || s == "riesz" || s == "lelong" || s == "lelong-reduced" || s == "k" || s == "j";
}

Json EnvelopeResult::to_json() const {
    return {{"value", extended_to_json(value)},
            {"best_params", best_params},
            {"best_disc", best_params.empty() ? Json(nullptr) : disc_to_json(best_disc)},
            {"evals", evals},
            {"converged", converged},
            {"diagnostic", diagnostic}};
}

Objective make_envelope_objective(const DiscFunctional& h, const DiscFamily& family, const Point& x,
                                  const EnvelopeOptions& opts) {
    auto grid = circle_grid(opts.boundary_samples);
    std::optional<DomainSpec> dom = opts.boundary_domain;
    return [h, family, x, grid, dom](std::span<const double> th) -> double {
        try {
            const ProjectiveDisc d = family.build(x, th);
            const auto s = sample_boundary(d, *grid);
            if (!(s.f0_clearance >= kBoundaryClearance)) return 2.0 * kPenalty;
            if (dom) {
                const double c = dom->boundary_clearance(s);
                if (!(c < 0.0)) return kPenalty + std::min(c, 0.5 * kPenalty);
            }
            return h.core(d, s);
        } catch (const NumericError&) {
            return kPosInf;
        }
    };
}

EnvelopeResult envelope(const DiscFunctional& h, const DiscFamily& family, const Point& x,
                        const EnvelopeOptions& opts) {
    if (static_cast<int>(x.size()) != family.dim) throw ValidationError("center", "dimension mismatch with family");
    for (auto v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ValidationError("center", "not finite");
    if (opts.boundary_domain && opts.boundary_domain->dim() != family.dim)
        throw ValidationError("domain", "dimension mismatch with family");
    // Validates the center against the family (e.g. disc-domain families).
    family.build(x, family.constant_params());

    const Objective obj = make_envelope_objective(h, family, x, opts);

    OptimizerConfig cfg = opts.optimizer;
    cfg.box = family.box;
    std::vector<std::vector<double>> starts{family.constant_params()};
    for (auto& p : family.canonical_starts()) starts.push_back(std::move(p));
    starts.insert(starts.end(), opts.warm_starts.begin(), opts.warm_starts.end());

    EnvelopeResult res;
    MinimizeResult m;
    try {
        m = minimize(obj, cfg, starts, h.lower_bound);
    } catch (const NumericError& e) {
        res.diagnostic = std::string("no feasible disc found: ") + e.what();
        return res;
    }
    res.best_params = m.params;
    res.best_disc = family.build(x, m.params);
    res.evals = m.evals;
    if (!(m.value < kPenalty)) {
        res.value = kPosInf;
        res.diagnostic = "no feasible disc found";
        return res;
    }
    res.converged = true;
    res.value = m.value;
    if (h.center_term) {
        const double c = h.center_term(x);
        res.value = c == kNegInf ? kNegInf : c + m.value;
    }
    return res;
}

EnvelopeResult poisson_envelope(const ScalarField& u, const DiscFamily& family, const Point& x,
                                const EnvelopeOptions& opts) {
    return envelope(poisson_functional(u, opts.boundary_samples, opts.quadrature_guard), family, x, opts);
}

// ---------------------------------------------------------------- MemoField

std::size_t MemoField::KeyHash::operator()(const std::vector<std::int64_t>& k) const noexcept {
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    for (auto v : k) {
        h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

MemoField::MemoField(int dim, Compute compute, double resolution, int threads)
    : dim_(dim), compute_(std::move(compute)), res_(resolution), threads_(threads) {
    if (!(resolution > 0.0)) throw ValidationError("resolution", "must be positive");
}

std::vector<std::int64_t> MemoField::key(std::span<const cplx> z) const {
    if (static_cast<int>(z.size()) != dim_) throw ValidationError("point", "dimension mismatch with field");
    std::vector<std::int64_t> k(2 * z.size());
    for (size_t i = 0; i < z.size(); ++i) {
        k[2 * i] = std::llround(z[i].real() / res_);
        k[2 * i + 1] = std::llround(z[i].imag() / res_);
    }
    return k;
}

Point MemoField::lattice_point(const std::vector<std::int64_t>& k) const {
    Point p(dim_);
    for (int i = 0; i < dim_; ++i)
        p[i] = {static_cast<double>(k[2 * i]) * res_, static_cast<double>(k[2 * i + 1]) * res_};
    return p;
}

double MemoField::operator()(std::span<const cplx> z) {
    const auto k = key(z);
    {
        std::shared_lock lock(mu_);
        auto it = cache_.find(k);
        if (it != cache_.end()) return it->second;
    }
    const double v = compute_(lattice_point(k));
    ++computed_;
    std::unique_lock lock(mu_);
    cache_[k] = v;
    return v;
}

void MemoField::prefetch(std::span<const Point> pts) {
    std::vector<std::vector<std::int64_t>> missing;
    {
        std::set<std::vector<std::int64_t>> seen;
        std::shared_lock lock(mu_);
        for (const auto& p : pts) {
            auto k = key(p);
            if (cache_.count(k) || !seen.insert(k).second) continue;
            missing.push_back(std::move(k));
        }
    }
    if (missing.size() < 2) return;
    auto vals = parallel_map<double>(missing.size(), threads_, [&](std::size_t i) {
        return compute_(lattice_point(missing[i]));
    });
    computed_ += missing.size();
    std::unique_lock lock(mu_);
    for (size_t i = 0; i < missing.size(); ++i) cache_[missing[i]] = vals[i];
}

std::size_t MemoField::size() const {
    std::shared_lock lock(mu_);
    return cache_.size();
}

ScalarField MemoField::as_field(std::string name) {
    ScalarField f;
    f.dim = dim_;
    f.eval = [this](std::span<const cplx> z) { return (*this)(z); };
    f.prefetch = [this](std::span<const Point> pts) { prefetch(pts); };
    f.name = std::move(name);
    return f;
}

TwoStageResult two_stage_envelope(MemoField& inner, const DiscFamily& outer_family, const Point& x,
                                  const EnvelopeOptions& opts) {
    TwoStageResult r;
    r.inner_at_x = inner(x);
    const auto before = inner.computed();
    r.outer = poisson_envelope(inner.as_field("inner"), outer_family, x, opts);
    r.inner_evaluations = inner.computed() - before + 1;
    return r;
}

// ------------------------------------------------------------------- probes

UscReport usc_probe(const PointField& field, const Point& x, const std::vector<double>& radii, int samples,
                    double tol, std::function<std::vector<Point>(double)> shell) {
    if (radii.empty()) throw ValidationError("radii", "need at least one radius");
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw ValidationError("radii", "radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1])) throw ValidationError("radii", "radii must be decreasing");
    }
    if (!shell) {
        const int dim = static_cast<int>(x.size());
        shell = [&x, samples, dim](double r) {
            std::vector<Point> pts;
            for (int j = 0; j < samples; ++j) {
                if (dim == 1) {
                    pts.push_back({x[0] + std::polar(r, 2 * std::numbers::pi * (j + 0.5) / samples)});
                } else {
                    pts.push_back(offset(x, unit_direction(dim, 17, j), r));
                }
            }
            return pts;
        };
    }
    UscReport rep;
    rep.value_at_x = field(x);
    rep.limsup = kNegInf;
    const size_t first = radii.size() >= 2 ? radii.size() - 2 : 0;
    for (size_t i = first; i < radii.size(); ++i)
        for (const auto& p : shell(radii[i])) rep.limsup = std::max(rep.limsup, field(p));
    rep.gap = rep.limsup == kNegInf ? 0.0 : rep.limsup - rep.value_at_x;
    if (rep.value_at_x == kNegInf && rep.limsup == kNegInf) rep.gap = 0.0;
    rep.usc_ok = !(rep.gap > tol);
    return rep;
}

PshReport psh_check(const PointField& field, const Point& x, int n_discs, double radius, int samples, double tol,
                    std::uint64_t seed) {
    if (n_discs < 1 || samples < 8 || !(radius > 0.0)) throw ValidationError("psh_check", "invalid sampling setup");
    PshReport rep;
    const double v0 = field(x);
    const int dim = static_cast<int>(x.size());
    auto grid = circle_grid(samples);
    for (int d = 0; d < n_discs; ++d) {
        const Point v = dim == 1 ? Point{std::polar(1.0, 2 * std::numbers::pi * d / n_discs)}
                                 : unit_direction(dim, seed, d);
        std::vector<double> vals(static_cast<size_t>(samples));
        for (int j = 0; j < samples; ++j) vals[j] = field(offset(x, v, radius * grid->node(j)));
        const double mean = circle_mean_samples(vals);
        double margin = (v0 == kNegInf) ? kPosInf : mean - v0;
        if (std::isnan(margin)) margin = kPosInf;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        ++rep.discs;
    }
    rep.ok = rep.worst_margin >= -tol;
    return rep;
}

double lelong_number(const PointField& u, const Point& x, const std::vector<double>& radii, int samples) {
    if (radii.size() < 2) throw ValidationError("radii", "need at least two radii");
    const int dim = static_cast<int>(x.size());
    std::vector<double> lx, ly;
    for (double r : radii) {
        if (!(r > 0.0)) throw ValidationError("radii", "radii must be positive");
        double sup = kNegInf;
        for (int j = 0; j < samples; ++j) {
            const Point p = dim == 1 ? Point{x[0] + std::polar(r, 2 * std::numbers::pi * (j + 0.5) / samples)}
                                     : offset(x, unit_direction(dim, 23, j), r);
            sup = std::max(sup, u(p));
        }
        if (sup == kNegInf) continue;
        lx.push_back(std::log(r));
        ly.push_back(sup);
    }
    if (lx.empty()) return kPosInf;
    if (lx.size() < 2) return 0.0;
    double mx = 0, my = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return std::max(0.0, sxy / sxx);
}

// -------------------------------------------------------------------- chain

Json ChainReport::to_json() const {
    return {{"EP_k", extended_to_json(ep_k)}, {"EL", extended_to_json(el)},     {"EL_reduced", extended_to_json(el_red)},
            {"k", extended_to_json(k)},       {"ordered", ordered},             {"poisson_below", poisson_below},
            {"spread", spread}};
}

ChainReport chain_check(const WeightField& alpha, const DiscFamily& family, const Point& x, const ChainOptions& opts) {
    const DiscFunctional hl = lelong_functional(alpha, false), hr = lelong_functional(alpha, true),
                         hk = k_disc_functional(alpha);
    const auto el = envelope(hl, family, x, opts.inner);
    const auto er = envelope(hr, family, x, opts.inner);
    const auto ek = envelope(hk, family, x, opts.inner);

    ChainReport rep;
    rep.el = el.value;
    rep.el_red = er.value;
    rep.k = ek.value;
    // Re-evaluate every functional on the union of the best discs.
    for (const auto* r : {&el, &er, &ek}) {
        if (!r->converged) continue;
        rep.el = std::min(rep.el, lelong(alpha, r->best_disc, false));
        rep.el_red = std::min(rep.el_red, lelong(alpha, r->best_disc, true));
        rep.k = std::min(rep.k, k_functional(alpha, r->best_disc));
    }
    rep.ordered = !(rep.el > rep.el_red + 1e-9) && !(rep.el_red > rep.k + 1e-9);

    const EnvelopeOptions& kopts = opts.k_field ? *opts.k_field : opts.inner;
    // K <= 0, so 0 bounds k_alpha where the family admits no disc (the domain boundary).
    MemoField kfield(family.dim, [&](const Point& p) {
        try {
            return envelope(hk, family, p, kopts).value;
        } catch (const ValidationError&) {
            return 0.0;
        }
    });
    auto outer = poisson_envelope(kfield.as_field("k_alpha"), opts.outer_family, x, opts.outer);
    // The constant outer disc at x realizes k_alpha(x) itself.
    rep.ep_k = std::min(outer.value, rep.k);
    rep.poisson_below = !(rep.ep_k > rep.el + opts.tolerance);

    const double vals[4] = {rep.ep_k, rep.el, rep.el_red, rep.k};
    const double lo = *std::min_element(vals, vals + 4), hi = *std::max_element(vals, vals + 4);
    rep.spread = (lo == hi) ? 0.0 : hi - lo;
    return rep;
}

// --------------------------------------------------------------- FieldGrid

Point FieldGrid::point(int i_re, int i_im) const {
    Point p = base;
    const double re = n_re > 1 ? re_min + (re_max - re_min) * i_re / (n_re - 1) : re_min;
    const double im = n_im > 1 ? im_min + (im_max - im_min) * i_im / (n_im - 1) : im_min;
    p[coord] = {re, im};
    return p;
}

void FieldGrid::fill(const PointField& f, int threads) {
    if (n_re < 1 || n_im < 1) throw ValidationError("resolution", "grid resolution must be positive");
    if (coord < 0 || coord >= static_cast<int>(base.size())) throw ValidationError("coord", "out of range");
    values = parallel_map<double>(static_cast<size_t>(n_re) * n_im, threads, [&](size_t idx) {
        return f(point(static_cast<int>(idx % n_re), static_cast<int>(idx / n_re)));
    });
}

std::string FieldGrid::to_csv() const {
    std::string out = "re, im, value\n";
    char buf[96];
    for (int j = 0; j < n_im; ++j) {
        for (int i = 0; i < n_re; ++i) {
            const cplx z = point(i, j)[coord];
            const double v = values[static_cast<size_t>(j) * n_re + i];
            if (v == kNegInf) std::snprintf(buf, sizeof buf, "%.17g, %.17g, -inf\n", z.real(), z.imag());
            else std::snprintf(buf, sizeof buf, "%.17g, %.17g, %.17g\n", z.real(), z.imag(), v);
            out += buf;
        }
    }
    return out;
}

Json FieldGrid::sidecar() const {
    return {{"schema_version", kSchemaVersion},
            {"functional", functional},
            {"family", family},
            {"seed", seed},
            {"base", point_to_json(base)},
            {"coord", coord},
            {"re_range", {re_min, re_max}},
            {"im_range", {im_min, im_max}},
            {"resolution", {n_re, n_im}},
            {"count", values.size()},
            {"neg_inf_encoding", "-inf"}};
}

} // namespace discenv
