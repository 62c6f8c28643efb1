#include "discenv/complex_poly.hpp"

#include <algorithm>
#include <cmath>

#include "discenv/error.hpp"

namespace discenv {

ComplexPoly::ComplexPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

void ComplexPoly::normalize() {
    while (coeffs_.size() > 1 && coeffs_.back() == cplx{}) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(cplx{});
}

ComplexPoly ComplexPoly::monomial(cplx c, int k) {
    if (k < 0) throw ValidationError("k", "negative monomial degree");
    std::vector<cplx> c_(static_cast<size_t>(k) + 1, cplx{});
    c_[k] = c;
    return ComplexPoly(std::move(c_));
}

ComplexPoly ComplexPoly::from_roots(std::span<const cplx> roots, cplx lead) {
    std::vector<cplx> c{lead};
    for (cplx r : roots) {
        std::vector<cplx> next(c.size() + 1, cplx{});
        for (size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return ComplexPoly(std::move(c));
}

double ComplexPoly::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

cplx ComplexPoly::operator()(cplx z) const noexcept {
    cplx acc = coeffs_.back();
    for (int k = degree() - 1; k >= 0; --k) acc = acc * z + coeffs_[k];
    return acc;
}

void ComplexPoly::eval_with_derivative(cplx z, cplx& p, cplx& dp) const noexcept {
    p = coeffs_.back();
    dp = cplx{};
    for (int k = degree() - 1; k >= 0; --k) {
        dp = dp * z + p;
        p = p * z + coeffs_[k];
    }
}

cplx ComplexPoly::eval_naive(cplx z) const noexcept {
    cplx acc{};
    for (int k = 0; k <= degree(); ++k) acc += coeffs_[k] * std::pow(z, k);
    return acc;
}

ComplexPoly ComplexPoly::derivative() const {
    if (degree() == 0) return ComplexPoly();
    std::vector<cplx> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return ComplexPoly(std::move(d));
}

ComplexPoly ComplexPoly::taylor_shift(cplx z0) const {
    // Repeated synthetic division.
    std::vector<cplx> c = coeffs_;
    const int n = degree();
    for (int i = 0; i < n; ++i)
        for (int k = n - 1; k >= i; --k) c[k] += z0 * c[k + 1];
    return ComplexPoly(std::move(c));
}

int ComplexPoly::vanishing_order(cplx z0, double rel_tol) const {
    if (is_zero()) return degree() + 1;
    const ComplexPoly s = taylor_shift(z0);
    const double scale = std::max(max_abs_coeff(), s.max_abs_coeff());
    for (int k = 0; k <= s.degree(); ++k)
        if (std::abs(s.coeffs_[k]) > rel_tol * scale) return k;
    return s.degree();
}

ComplexPoly ComplexPoly::trimmed(double rel_tol) const {
    const double thr = rel_tol * max_abs_coeff();
    std::vector<cplx> c = coeffs_;
    while (c.size() > 1 && std::abs(c.back()) <= thr) c.pop_back();
    return ComplexPoly(std::move(c));
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), cplx{});
    for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    normalize();
    return *this;
}

ComplexPoly& ComplexPoly::operator-=(const ComplexPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), cplx{});
    for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    normalize();
    return *this;
}

ComplexPoly& ComplexPoly::operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    normalize();
    return *this;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
    std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, cplx{});
    for (size_t i = 0; i < a.coeffs_.size(); ++i)
        for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::pow(int k) const {
    if (k < 0) throw ValidationError("k", "negative power");
    ComplexPoly r = ComplexPoly::constant(1.0);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

} // namespace discenv
