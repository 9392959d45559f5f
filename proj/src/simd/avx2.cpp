// AVX2 + FMA variants. Built with -mavx2 -mfma; only reached through the
// dispatch table after a runtime CPU check.

#include <immintrin.h>

#include "linopt/simd/kernels.hpp"

namespace linopt::simd::detail {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

}  // namespace

Cplx cdot_avx2(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
               std::size_t n) {
    __m256d re0 = _mm256_setzero_pd();
    __m256d im0 = _mm256_setzero_pd();
    __m256d re1 = _mm256_setzero_pd();
    __m256d im1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        __m256d ar = _mm256_loadu_pd(a_re + k);
        __m256d ai = _mm256_loadu_pd(a_im + k);
        __m256d br = _mm256_loadu_pd(b_re + k);
        __m256d bi = _mm256_loadu_pd(b_im + k);
        re0 = _mm256_fmadd_pd(ar, br, re0);
        re0 = _mm256_fmadd_pd(ai, bi, re0);
        im0 = _mm256_fmadd_pd(ar, bi, im0);
        im0 = _mm256_fnmadd_pd(ai, br, im0);

        ar = _mm256_loadu_pd(a_re + k + 4);
        ai = _mm256_loadu_pd(a_im + k + 4);
        br = _mm256_loadu_pd(b_re + k + 4);
        bi = _mm256_loadu_pd(b_im + k + 4);
        re1 = _mm256_fmadd_pd(ar, br, re1);
        re1 = _mm256_fmadd_pd(ai, bi, re1);
        im1 = _mm256_fmadd_pd(ar, bi, im1);
        im1 = _mm256_fnmadd_pd(ai, br, im1);
    }
    for (; k + 4 <= n; k += 4) {
        __m256d ar = _mm256_loadu_pd(a_re + k);
        __m256d ai = _mm256_loadu_pd(a_im + k);
        __m256d br = _mm256_loadu_pd(b_re + k);
        __m256d bi = _mm256_loadu_pd(b_im + k);
        re0 = _mm256_fmadd_pd(ar, br, re0);
        re0 = _mm256_fmadd_pd(ai, bi, re0);
        im0 = _mm256_fmadd_pd(ar, bi, im0);
        im0 = _mm256_fnmadd_pd(ai, br, im0);
    }
    double re = hsum(_mm256_add_pd(re0, re1));
    double im = hsum(_mm256_add_pd(im0, im1));
    for (; k < n; ++k) {
        re += a_re[k] * b_re[k] + a_im[k] * b_im[k];
        im += a_re[k] * b_im[k] - a_im[k] * b_re[k];
    }
    return {re, im};
}

void caxpy_avx2(Cplx alpha, const double* x_re, const double* x_im, double* y_re, double* y_im,
                std::size_t n) {
    const __m256d ar = _mm256_set1_pd(alpha.re);
    const __m256d ai = _mm256_set1_pd(alpha.im);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d xr = _mm256_loadu_pd(x_re + k);
        __m256d xi = _mm256_loadu_pd(x_im + k);
        __m256d yr = _mm256_loadu_pd(y_re + k);
        __m256d yi = _mm256_loadu_pd(y_im + k);
        yr = _mm256_fmadd_pd(ar, xr, yr);
        yr = _mm256_fnmadd_pd(ai, xi, yr);
        yi = _mm256_fmadd_pd(ar, xi, yi);
        yi = _mm256_fmadd_pd(ai, xr, yi);
        _mm256_storeu_pd(y_re + k, yr);
        _mm256_storeu_pd(y_im + k, yi);
    }
    for (; k < n; ++k) {
        y_re[k] += alpha.re * x_re[k] - alpha.im * x_im[k];
        y_im[k] += alpha.re * x_im[k] + alpha.im * x_re[k];
    }
}

double norm_sq_avx2(const double* re, const double* im, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d r = _mm256_loadu_pd(re + k);
        __m256d i = _mm256_loadu_pd(im + k);
        acc0 = _mm256_fmadd_pd(r, r, acc0);
        acc1 = _mm256_fmadd_pd(i, i, acc1);
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < n; ++k) sum += re[k] * re[k] + im[k] * im[k];
    return sum;
}

double max_abs_diff_avx2(const double* a_re, const double* a_im, const double* b_re,
                         const double* b_im, std::size_t n) {
    // Track the maximum squared modulus and take one square root at the end;
    // sqrt is monotone, so this equals the per-element maximum.
    __m256d worst = _mm256_setzero_pd();
    __m256d nan_seen = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(a_re + k), _mm256_loadu_pd(b_re + k));
        __m256d di = _mm256_sub_pd(_mm256_loadu_pd(a_im + k), _mm256_loadu_pd(b_im + k));
        __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(di, di));
        nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(d2, d2, _CMP_UNORD_Q));
        worst = _mm256_max_pd(worst, d2);
    }
    double w = hmax(worst);
    bool any_nan = _mm256_movemask_pd(nan_seen) != 0;
    for (; k < n; ++k) {
        const double dr = a_re[k] - b_re[k];
        const double di = a_im[k] - b_im[k];
        const double d2 = dr * dr + di * di;
        if (d2 != d2) any_nan = true;
        if (d2 > w) w = d2;
    }
    if (any_nan) return __builtin_nan("");
    return _mm_cvtsd_f64(_mm_sqrt_sd(_mm_setzero_pd(), _mm_set_sd(w)));
}

}  // namespace linopt::simd::detail
