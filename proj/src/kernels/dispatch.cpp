#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "discenv/kernels.hpp"

namespace discenv::simd {
namespace {

Backend initial_backend() noexcept {
    if (const char* env = std::getenv("DISCENV_SIMD"); env && std::strcmp(env, "scalar") == 0)
        return Backend::Scalar;
    return detected_backend();
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> b{initial_backend()};
    return b;
}

} // namespace

const char* backend_name(Backend b) noexcept { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool backend_supported(Backend b) noexcept {
    if (b == Backend::Scalar) return true;
#if DISCENV_HAVE_AVX2_KERNELS
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detected_backend() noexcept {
    return backend_supported(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    if (!backend_supported(b)) throw std::invalid_argument(std::string("SIMD backend not supported: ") + backend_name(b));
    current().store(b, std::memory_order_relaxed);
}

#if DISCENV_HAVE_AVX2_KERNELS
#define DISCENV_DISPATCH(fn, ...)                                                       \
    (active_backend() == Backend::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define DISCENV_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void horner(std::span<const cplx> coeffs, std::span<const double> zr, std::span<const double> zi,
            std::span<double> outr, std::span<double> outi) {
    DISCENV_DISPATCH(horner, coeffs, zr, zi, outr, outi);
}

void divide(std::span<const double> ar, std::span<const double> ai, std::span<const double> br,
            std::span<const double> bi, std::span<double> outr, std::span<double> outi) {
    DISCENV_DISPATCH(divide, ar, ai, br, bi, outr, outi);
}

void abs2(std::span<const double> re, std::span<const double> im, std::span<double> out) {
    DISCENV_DISPATCH(abs2, re, im, out);
}

double sum(std::span<const double> x) { return DISCENV_DISPATCH(sum, x); }

void blaschke_abs2_accumulate(cplx a, std::span<const double> zr, std::span<const double> zi,
                              std::span<double> acc) {
    DISCENV_DISPATCH(blaschke_abs2_accumulate, a, zr, zi, acc);
}

} // namespace discenv::simd
