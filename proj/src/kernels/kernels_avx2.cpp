#include "discenv/kernels.hpp"

#if DISCENV_HAVE_AVX2_KERNELS

#include <immintrin.h>

#define DISCENV_AVX2 __attribute__((target("avx2,fma")))

namespace discenv::simd::avx2 {

DISCENV_AVX2 void horner(std::span<const cplx> coeffs, std::span<const double> zr, std::span<const double> zi,
                         std::span<double> outr, std::span<double> outi) {
    const size_t n = zr.size();
    const int deg = static_cast<int>(coeffs.size()) - 1;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xr = _mm256_loadu_pd(zr.data() + i);
        const __m256d xi = _mm256_loadu_pd(zi.data() + i);
        __m256d pr = _mm256_set1_pd(coeffs[deg].real());
        __m256d pi = _mm256_set1_pd(coeffs[deg].imag());
        for (int k = deg - 1; k >= 0; --k) {
            // (pr + i pi)(xr + i xi) + c_k
            const __m256d tr = _mm256_fmsub_pd(pr, xr, _mm256_fmsub_pd(pi, xi, _mm256_set1_pd(coeffs[k].real())));
            const __m256d ti = _mm256_fmadd_pd(pr, xi, _mm256_fmadd_pd(pi, xr, _mm256_set1_pd(coeffs[k].imag())));
            pr = tr;
            pi = ti;
        }
        _mm256_storeu_pd(outr.data() + i, pr);
        _mm256_storeu_pd(outi.data() + i, pi);
    }
    if (i < n)
        scalar::horner(coeffs, zr.subspan(i), zi.subspan(i), outr.subspan(i), outi.subspan(i));
}

DISCENV_AVX2 void divide(std::span<const double> ar, std::span<const double> ai, std::span<const double> br,
                         std::span<const double> bi, std::span<double> outr, std::span<double> outi) {
    const size_t n = ar.size();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a_r = _mm256_loadu_pd(ar.data() + i);
        const __m256d a_i = _mm256_loadu_pd(ai.data() + i);
        const __m256d b_r = _mm256_loadu_pd(br.data() + i);
        const __m256d b_i = _mm256_loadu_pd(bi.data() + i);
        const __m256d d = _mm256_fmadd_pd(b_r, b_r, _mm256_mul_pd(b_i, b_i));
        const __m256d nr = _mm256_fmadd_pd(a_r, b_r, _mm256_mul_pd(a_i, b_i));
        const __m256d ni = _mm256_fmsub_pd(a_i, b_r, _mm256_mul_pd(a_r, b_i));
        _mm256_storeu_pd(outr.data() + i, _mm256_div_pd(nr, d));
        _mm256_storeu_pd(outi.data() + i, _mm256_div_pd(ni, d));
    }
    if (i < n)
        scalar::divide(ar.subspan(i), ai.subspan(i), br.subspan(i), bi.subspan(i), outr.subspan(i),
                       outi.subspan(i));
}

DISCENV_AVX2 void abs2(std::span<const double> re, std::span<const double> im, std::span<double> out) {
    const size_t n = re.size();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_loadu_pd(re.data() + i);
        const __m256d m = _mm256_loadu_pd(im.data() + i);
        _mm256_storeu_pd(out.data() + i, _mm256_fmadd_pd(r, r, _mm256_mul_pd(m, m)));
    }
    if (i < n) scalar::abs2(re.subspan(i), im.subspan(i), out.subspan(i));
}

DISCENV_AVX2 double sum(std::span<const double> x) {
    __m256d acc = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= x.size(); i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x.data() + i));
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double s = (lane[0] + lane[2]) + (lane[1] + lane[3]);
    for (; i < x.size(); ++i) s += x[i];
    return s;
}

DISCENV_AVX2 void blaschke_abs2_accumulate(cplx a, std::span<const double> zr, std::span<const double> zi,
                                           std::span<double> acc) {
    const size_t n = zr.size();
    const __m256d a_r = _mm256_set1_pd(a.real());
    const __m256d a_i = _mm256_set1_pd(a.imag());
    const __m256d one = _mm256_set1_pd(1.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(zr.data() + i);
        const __m256d y = _mm256_loadu_pd(zi.data() + i);
        const __m256d nr = _mm256_sub_pd(x, a_r);
        const __m256d ni = _mm256_sub_pd(y, a_i);
        const __m256d dr = _mm256_sub_pd(one, _mm256_fmadd_pd(a_r, x, _mm256_mul_pd(a_i, y)));
        const __m256d di = _mm256_fmsub_pd(a_i, x, _mm256_mul_pd(a_r, y));
        const __m256d num = _mm256_fmadd_pd(nr, nr, _mm256_mul_pd(ni, ni));
        const __m256d den = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
        const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(acc.data() + i), _mm256_div_pd(num, den));
        _mm256_storeu_pd(acc.data() + i, v);
    }
    if (i < n) scalar::blaschke_abs2_accumulate(a, zr.subspan(i), zi.subspan(i), acc.subspan(i));
}

} // namespace discenv::simd::avx2

#endif
