#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "discenv/complex_poly.hpp"

namespace discenv {

/// Default number of circle quadrature nodes.
inline constexpr int kDefaultCircleNodes = 512;

/// Equispaced nodes on the unit circle, e^{i(2 pi j + phase)/n}, stored split.
struct CircleGrid {
    int n = 0;
    double phase = 0.0;
    std::vector<double> re, im;

    cplx node(int j) const { return {re[j], im[j]}; }
    double angle(int j) const;
};

/// Shared immutable grid for (n, phase); thread safe.
std::shared_ptr<const CircleGrid> circle_grid(int n, double phase = 0.0);

/// Mean of already sampled values on a circle; -inf if any sample is -inf.
double circle_mean_samples(std::span<const double> samples);

/// (1/2pi) int_0^{2pi} g(e^{it}) dt by the n-node trapezoid rule.
///
/// If a single sample (a fraction <= 1/n) is -inf, the integrand is treated
/// as having an integrable log singularity: the rule is re-run once on a
/// shifted grid of 2n nodes. Any -inf remaining after that returns -inf.
double circle_mean(const std::function<double(cplx)>& g, int n = kDefaultCircleNodes);

/// (1/2pi) int_{t0}^{t1} g(e^{it}) dt by composite Gauss-Legendre panels.
double arc_integral(const std::function<double(cplx)>& g, double t0, double t1, int panels = 64);

} // namespace discenv
