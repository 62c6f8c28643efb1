#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "discenv/domain.hpp"
#include "discenv/family.hpp"
#include "discenv/functionals.hpp"
#include "discenv/json_io.hpp"
#include "discenv/optimizer.hpp"

namespace discenv {

/// A disc functional H with an optional additive center term:
/// H(f) = center_term(f(0)) + core(f, boundary samples). Envelopes minimize
/// the core only, so functionals differing by a center term share a search.
struct DiscFunctional {
    std::string name;
    std::function<double(const ProjectiveDisc&, const BoundarySamples&)> core;
    std::function<double(const Point&)> center_term;
    /// Known lower bound of the core; the search stops once it is attained.
    std::optional<double> lower_bound;

    double operator()(const ProjectiveDisc& f, int n = kDefaultCircleNodes) const;
};

/// Guarded: the larger of the means over two interleaved n-node grids, so a
/// node landing on a singularity of u cannot lower the estimate.
DiscFunctional poisson_functional(const ScalarField& u, int n = kDefaultCircleNodes, bool guarded = true);
/// u(x) + P_{-u}(f): equal to riesz(u, f) on every disc when unguarded.
DiscFunctional riesz_functional(const ScalarField& u, int n = kDefaultCircleNodes, bool guarded = true);
DiscFunctional lelong_functional(const WeightField& alpha, bool reduced);
DiscFunctional k_disc_functional(const WeightField& alpha);
DiscFunctional j_disc_functional();
/// Lookup by CLI name: "poisson", "riesz", "lelong", "lelong-reduced", "k", "j".
bool is_functional_name(const std::string& s);

struct EnvelopeOptions {
    OptimizerConfig optimizer;  ///< the family box replaces optimizer.box
    /// Discs must map the circle into this open set (hard penalty otherwise).
    std::optional<DomainSpec> boundary_domain;
    int boundary_samples = kDefaultCircleNodes;
    /// Interleaved-grid guard of Poisson integrals (see poisson_functional).
    bool quadrature_guard = true;
    std::vector<std::vector<double>> warm_starts;  ///< tried after the constant disc
};

/// Infeasible discs score kPenalty plus their constraint violation.
inline constexpr double kPenalty = 1e6;

struct EnvelopeResult {
    double value = kPosInf;
    std::vector<double> best_params;
    ProjectiveDisc best_disc;
    long evals = 0;
    bool converged = false;
    std::string diagnostic;

    Json to_json() const;
};

/// The penalized objective minimized by envelope(): H's core on the disc
/// build(x, theta), kPenalty plus the violation for discs leaving the
/// boundary domain, 2 kPenalty for boundaries meeting H, +inf on numeric failure.
Objective make_envelope_objective(const DiscFunctional& h, const DiscFamily& family, const Point& x,
                                  const EnvelopeOptions& opts);

/// inf of H over discs of the family centered at x (the constant disc is
/// always the first start). value = +inf with converged = false when no
/// feasible disc is found.
EnvelopeResult envelope(const DiscFunctional& h, const DiscFamily& family, const Point& x,
                        const EnvelopeOptions& opts);
EnvelopeResult poisson_envelope(const ScalarField& u, const DiscFamily& family, const Point& x,
                                const EnvelopeOptions& opts);

/// On-demand memoized field. Points are snapped to a lattice of spacing
/// `resolution` and the field is computed at the lattice point, so the value
/// returned for a point does not depend on query order or thread count.
/// Concurrent reads and inserts are safe.
class MemoField {
public:
    using Compute = std::function<double(const Point&)>;

    MemoField(int dim, Compute compute, double resolution = 1e-3, int threads = 0);

    double operator()(std::span<const cplx> z);
    /// Computes all missing lattice points of the batch on the worker pool.
    void prefetch(std::span<const Point> pts);
    std::size_t size() const;
    std::size_t computed() const noexcept { return computed_; }
    double resolution() const noexcept { return res_; }
    /// ScalarField view; the MemoField must outlive it.
    ScalarField as_field(std::string name);

private:
    struct KeyHash {
        std::size_t operator()(const std::vector<std::int64_t>& k) const noexcept;
    };
    std::vector<std::int64_t> key(std::span<const cplx> z) const;
    Point lattice_point(const std::vector<std::int64_t>& k) const;

    int dim_;
    Compute compute_;
    double res_;
    int threads_;
    mutable std::shared_mutex mu_;
    std::unordered_map<std::vector<std::int64_t>, double, KeyHash> cache_;
    std::atomic<std::size_t> computed_{0};
};

/// Poisson envelope of an inner envelope field evaluated on demand.
struct TwoStageResult {
    EnvelopeResult outer;
    double inner_at_x = kPosInf;
    std::size_t inner_evaluations = 0;
};
TwoStageResult two_stage_envelope(MemoField& inner, const DiscFamily& outer_family, const Point& x,
                                  const EnvelopeOptions& opts);

using PointField = std::function<double(const Point&)>;

/// Deterministic rotation-invariant unit vector number `index` of C^n.
Point unit_direction(int dim, std::uint64_t seed, std::uint64_t index);

struct UscReport {
    double value_at_x = 0.0;
    double limsup = 0.0;
    bool usc_ok = true;
    double gap = 0.0;  ///< limsup - value (positive means a drop at x)
};

/// Samples the field on shells around x (radii decreasing); limsup is the max
/// over the two smallest shells. `shell(r)` returns the sample points of the
/// shell of radius r; the default shell uses `samples` points of
/// |z - x| = r along a deterministic set of complex directions.
UscReport usc_probe(const PointField& field, const Point& x, const std::vector<double>& radii, int samples,
                    double tol = 1e-2, std::function<std::vector<Point>(double)> shell = {});

struct PshReport {
    bool ok = true;
    double worst_margin = kPosInf;  ///< min over discs of mean - value at x
    int discs = 0;
};

/// Sub-mean-value test on n_discs complex-line discs x + r v zeta with
/// deterministic unit directions v; ok when every margin >= -tol.
PshReport psh_check(const PointField& field, const Point& x, int n_discs, double radius, int samples = 64,
                    double tol = 1e-9, std::uint64_t seed = 0);

/// Least-squares slope of sup_{|z - x| = r} u against log r, clamped at 0;
/// +inf when every sample is -inf.
double lelong_number(const PointField& u, const Point& x, const std::vector<double>& radii, int samples = 64);

struct ChainReport {
    double ep_k = 0.0;   ///< EP_{k_alpha}
    double el = 0.0;     ///< EL_alpha
    double el_red = 0.0; ///< EL~_alpha
    double k = 0.0;      ///< k_alpha = EK_alpha
    bool ordered = true;         ///< EL <= EL~ <= k within 1e-9 on shared discs
    bool poisson_below = true;   ///< EP_{k_alpha} <= EL + tolerance
    double spread = 0.0;
    Json to_json() const;
};

struct ChainOptions {
    EnvelopeOptions inner;          ///< EL, EL~, EK
    std::optional<EnvelopeOptions> k_field;  ///< k_alpha integrand of EP_{k_alpha}; defaults to inner
    EnvelopeOptions outer;          ///< EP_{k_alpha}
    DiscFamily outer_family;
    double tolerance = 5e-2;
};

ChainReport chain_check(const WeightField& alpha, const DiscFamily& family, const Point& x, const ChainOptions& opts);

/// Values on an axis-aligned box of one complex coordinate of C^n (the other
/// coordinates fixed at `base`).
struct FieldGrid {
    Point base;
    int coord = 0;
    double re_min = -1, re_max = 1, im_min = -1, im_max = 1;
    int n_re = 2, n_im = 2;
    std::vector<double> values;  ///< row-major, im index outer
    std::string functional;
    Json family = Json::object();
    std::uint64_t seed = 0;

    Point point(int i_re, int i_im) const;
    void fill(const PointField& f, int threads = 0);
    /// CSV with header "re, im, value"; -inf written as -inf.
    std::string to_csv() const;
    Json sidecar() const;
};

} // namespace discenv
