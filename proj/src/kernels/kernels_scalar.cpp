#include "discenv/kernels.hpp"

namespace discenv::simd::scalar {

void horner(std::span<const cplx> coeffs, std::span<const double> zr, std::span<const double> zi,
            std::span<double> outr, std::span<double> outi) {
    const size_t n = zr.size();
    const int deg = static_cast<int>(coeffs.size()) - 1;
    for (size_t i = 0; i < n; ++i) {
        double pr = coeffs[deg].real(), pi = coeffs[deg].imag();
        const double xr = zr[i], xi = zi[i];
        for (int k = deg - 1; k >= 0; --k) {
            const double tr = pr * xr - pi * xi + coeffs[k].real();
            const double ti = pr * xi + pi * xr + coeffs[k].imag();
            pr = tr;
            pi = ti;
        }
        outr[i] = pr;
        outi[i] = pi;
    }
}

void divide(std::span<const double> ar, std::span<const double> ai, std::span<const double> br,
            std::span<const double> bi, std::span<double> outr, std::span<double> outi) {
    for (size_t i = 0; i < ar.size(); ++i) {
        const double d = br[i] * br[i] + bi[i] * bi[i];
        const double r = (ar[i] * br[i] + ai[i] * bi[i]) / d;
        const double m = (ai[i] * br[i] - ar[i] * bi[i]) / d;
        outr[i] = r;
        outi[i] = m;
    }
}

void abs2(std::span<const double> re, std::span<const double> im, std::span<double> out) {
    for (size_t i = 0; i < re.size(); ++i) out[i] = re[i] * re[i] + im[i] * im[i];
}

double sum(std::span<const double> x) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    size_t i = 0;
    for (; i + 4 <= x.size(); i += 4)
        for (int l = 0; l < 4; ++l) lane[l] += x[i + l];
    double s = (lane[0] + lane[2]) + (lane[1] + lane[3]);
    for (; i < x.size(); ++i) s += x[i];
    return s;
}

void blaschke_abs2_accumulate(cplx a, std::span<const double> zr, std::span<const double> zi,
                              std::span<double> acc) {
    const double ar = a.real(), ai = a.imag();
    for (size_t i = 0; i < zr.size(); ++i) {
        const double nr = zr[i] - ar, ni = zi[i] - ai;
        // 1 - conj(a) z
        const double dr = 1.0 - (ar * zr[i] + ai * zi[i]);
        const double di = -(ar * zi[i] - ai * zr[i]);
        acc[i] *= (nr * nr + ni * ni) / (dr * dr + di * di);
    }
}

} // namespace discenv::simd::scalar
