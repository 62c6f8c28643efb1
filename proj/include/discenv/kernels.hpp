#pragma once
// Data-parallel inner loops: batch polynomial evaluation on sample points,
// complex division, reductions and Blaschke-factor moduli.
//
// Every kernel has a scalar reference implementation (namespace scalar) and,
// on x86-64, an AVX2/FMA variant (namespace avx2) compiled with target
// attributes. The dispatching entry points pick the variant once at startup
// from CPUID; set_backend() overrides it (tests and benchmarking).
//
// Points and values are stored split (structure of arrays): re[] and im[].

#include <complex>
#include <cstddef>
#include <span>

namespace discenv::simd {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

const char* backend_name(Backend b) noexcept;
/// Best backend supported by the running CPU.
Backend detected_backend() noexcept;
Backend active_backend() noexcept;
/// Throws std::invalid_argument if the CPU lacks the requested backend.
void set_backend(Backend b);
bool backend_supported(Backend b) noexcept;

/// out = p(z) for every point, Horner with coefficients constant-term first.
void horner(std::span<const cplx> coeffs, std::span<const double> zr, std::span<const double> zi,
            std::span<double> outr, std::span<double> outi);
/// out = a / b elementwise.
void divide(std::span<const double> ar, std::span<const double> ai, std::span<const double> br,
            std::span<const double> bi, std::span<double> outr, std::span<double> outi);
/// out = re^2 + im^2.
void abs2(std::span<const double> re, std::span<const double> im, std::span<double> out);
/// Sum of x (four-lane partial sums on every backend).
double sum(std::span<const double> x);
/// acc[i] *= |z_i - a|^2 / |1 - conj(a) z_i|^2
void blaschke_abs2_accumulate(cplx a, std::span<const double> zr, std::span<const double> zi,
                              std::span<double> acc);

namespace scalar {
void horner(std::span<const cplx>, std::span<const double>, std::span<const double>, std::span<double>,
            std::span<double>);
void divide(std::span<const double>, std::span<const double>, std::span<const double>, std::span<const double>,
            std::span<double>, std::span<double>);
void abs2(std::span<const double>, std::span<const double>, std::span<double>);
double sum(std::span<const double>);
void blaschke_abs2_accumulate(cplx, std::span<const double>, std::span<const double>, std::span<double>);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define DISCENV_HAVE_AVX2_KERNELS 1
namespace avx2 {
void horner(std::span<const cplx>, std::span<const double>, std::span<const double>, std::span<double>,
            std::span<double>);
void divide(std::span<const double>, std::span<const double>, std::span<const double>, std::span<const double>,
            std::span<double>, std::span<double>);
void abs2(std::span<const double>, std::span<const double>, std::span<double>);
double sum(std::span<const double>);
void blaschke_abs2_accumulate(cplx, std::span<const double>, std::span<const double>, std::span<double>);
} // namespace avx2
#else
#define DISCENV_HAVE_AVX2_KERNELS 0
#endif

} // namespace discenv::simd
