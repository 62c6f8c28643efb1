#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "discenv/disc.hpp"

namespace discenv {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Point-evaluable function with values in [-inf, +inf). `eval` must be safe
/// for concurrent calls. `prefetch`, when set, is handed every batch of
/// boundary points before they are evaluated one by one.
struct ScalarField {
    int dim = 1;
    std::function<double(std::span<const cplx>)> eval;
    bool usc = true;
    std::string name;
    std::function<void(std::span<const Point>)> prefetch;

    double operator()(std::span<const cplx> z) const { return eval(z); }
};

ScalarField constant_field(int dim, double c);
ScalarField negated(const ScalarField& u);

struct WeightPoint {
    Point y;
    double weight = 1.0;
};

/// Finitely supported nonnegative function: alpha(y_j) = weight_j, 0 elsewhere.
struct WeightField {
    std::vector<WeightPoint> support;

    WeightField() = default;
    /// Validates: positive weights, pairwise distinct points of one dimension.
    explicit WeightField(std::vector<WeightPoint> s);
    bool empty() const noexcept { return support.empty(); }
    /// alpha(z) (exact comparison with the support points).
    double operator()(std::span<const cplx> z) const;
};

/// (1/2pi) int u(f(e^{it})) dt on n nodes with the -inf refinement rule.
double poisson(const ScalarField& u, const ProjectiveDisc& f, int n = kDefaultCircleNodes);
/// Same, from boundary samples already taken on the phase-0 grid.
double poisson(const ScalarField& u, const ProjectiveDisc& f, const BoundarySamples& s);
/// u(f(0)) - poisson(u, f); -inf when u(f(0)) = -inf.
double riesz(const ScalarField& u, const ProjectiveDisc& f, int n = kDefaultCircleNodes);
/// sum_j alpha_j sum_{f(z) = y_j} m_f(z) log|z|, without multiplicities when reduced.
double lelong(const WeightField& alpha, const ProjectiveDisc& f, bool reduced);
/// min(0, min over support preimages z of alpha(f(z)) log|z|).
double k_functional(const WeightField& alpha, const ProjectiveDisc& f);
/// -sum m log|z| over the infinity divisor; +inf when it contains 0.
double j_functional(const ProjectiveDisc& f);
/// sum_i w_i log|(zeta - z_i) / (1 - conj(z_i) zeta)|.
double green_sum(const Divisor& d, std::span<const double> weights, cplx zeta);
/// Batch form on split points (out.size() == zr.size()).
void green_sum(const Divisor& d, std::span<const double> weights, std::span<const double> zr,
               std::span<const double> zi, std::span<double> out);
/// Divisor of all support preimages with per-point weights alpha_j * m (or
/// alpha_j when reduced); the ingredients of the Green sum whose value at 0
/// is the Lelong functional.
void lelong_divisor(const WeightField& alpha, const ProjectiveDisc& f, bool reduced, Divisor& d,
                    std::vector<double>& weights);

} // namespace discenv
