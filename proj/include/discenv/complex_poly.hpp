#pragma once

#include <complex>
#include <span>
#include <vector>

namespace discenv {

using cplx = std::complex<double>;

/// Polynomial with complex coefficients, constant term first.
///
/// Trailing coefficients that are exactly zero are dropped on construction,
/// so degree() is the index of the last nonzero coefficient. The zero
/// polynomial is stored as a single zero coefficient and reports degree 0.
class ComplexPoly {
public:
    ComplexPoly() : coeffs_{cplx{0.0, 0.0}} {}
    explicit ComplexPoly(std::vector<cplx> coeffs);
    ComplexPoly(std::initializer_list<cplx> coeffs) : ComplexPoly(std::vector<cplx>(coeffs)) {}

    static ComplexPoly constant(cplx c) { return ComplexPoly({c}); }
    static ComplexPoly monomial(cplx c, int k);
    /// lead * prod (z - r_j)
    static ComplexPoly from_roots(std::span<const cplx> roots, cplx lead = 1.0);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == cplx{}; }
    const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    cplx coeff(int k) const noexcept {
        return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : cplx{};
    }
    cplx leading() const noexcept { return coeffs_.back(); }
    double max_abs_coeff() const noexcept;

    /// Horner evaluation.
    cplx operator()(cplx z) const noexcept;
    /// Horner evaluation of p and p' together.
    void eval_with_derivative(cplx z, cplx& p, cplx& dp) const noexcept;
    /// Sum of c_k z^k with explicit powers; reference for tests.
    cplx eval_naive(cplx z) const noexcept;

    ComplexPoly derivative() const;
    /// Coefficients of t -> p(z0 + t).
    ComplexPoly taylor_shift(cplx z0) const;
    /// Order of vanishing of p at z0: index of the first Taylor coefficient at
    /// z0 whose modulus exceeds rel_tol * max_abs_coeff(). Returns degree()+1
    /// for the zero polynomial.
    int vanishing_order(cplx z0, double rel_tol) const;
    /// Drops trailing coefficients with modulus <= rel_tol * max_abs_coeff().
    ComplexPoly trimmed(double rel_tol) const;

    ComplexPoly& operator+=(const ComplexPoly& o);
    ComplexPoly& operator-=(const ComplexPoly& o);
    ComplexPoly& operator*=(cplx s);

    friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
    friend ComplexPoly operator-(ComplexPoly a, const ComplexPoly& b) { return a -= b; }
    friend ComplexPoly operator*(ComplexPoly a, cplx s) { return a *= s; }
    friend ComplexPoly operator*(cplx s, ComplexPoly a) { return a *= s; }
    friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);

    ComplexPoly pow(int k) const;

    friend bool operator==(const ComplexPoly& a, const ComplexPoly& b) { return a.coeffs_ == b.coeffs_; }

private:
    void normalize();
    std::vector<cplx> coeffs_;
};

} // namespace discenv
