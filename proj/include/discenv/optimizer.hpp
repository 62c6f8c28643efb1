#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace discenv {

struct Bounds {
    double lo = 0.0;
    double hi = 1.0;
};

struct OptimizerConfig {
    int restarts = 8;        ///< low-discrepancy starts after the warm starts
    int max_evals = 2000;    ///< evaluation budget per start
    std::uint64_t seed = 0;
    double tolerance = 1e-8; ///< simplex size / value spread stopping threshold
    std::vector<Bounds> box;
};

struct MinimizeResult {
    std::vector<double> params;
    double value = 0.0;
    long evals = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Multistart Nelder-Mead with box projection.
///
/// Starts, in order: every warm start, then `restarts` points of a Halton
/// sequence rotated by a seed-derived shift. Each start runs an adaptive
/// Nelder-Mead that is re-expanded around its best vertex until it stalls or
/// the per-start budget is spent. The result never exceeds the objective at
/// any start point, and a run with R+1 restarts is never worse than one with R
/// (same seed), since the start sequence is prefix-stable.
///
/// If `lower_bound` is given, the search stops as soon as it is attained.
/// Throws NumericError("infeasible family") if every evaluation is +inf or NaN.
MinimizeResult minimize(const Objective& f, const OptimizerConfig& cfg,
                        std::span<const std::vector<double>> warm_starts = {},
                        std::optional<double> lower_bound = std::nullopt);

/// Start point number `index` of the seeded low-discrepancy sequence, mapped
/// into the box.
std::vector<double> quasi_random_point(const std::vector<Bounds>& box, std::uint64_t seed, std::uint64_t index);

/// splitmix64 step; the only source of randomness in the library.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;
/// Uniform double in [0, 1) from 53 random bits.
double uniform01(std::uint64_t& state) noexcept;

} // namespace discenv
