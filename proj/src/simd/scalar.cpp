#include <cmath>

#include "linopt/simd/kernels.hpp"

namespace linopt::simd::detail {

Cplx cdot_scalar(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                 std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        re += a_re[k] * b_re[k] + a_im[k] * b_im[k];
        im += a_re[k] * b_im[k] - a_im[k] * b_re[k];
    }
    return {re, im};
}

void caxpy_scalar(Cplx alpha, const double* x_re, const double* x_im, double* y_re, double* y_im,
                  std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        y_re[k] += alpha.re * x_re[k] - alpha.im * x_im[k];
        y_im[k] += alpha.re * x_im[k] + alpha.im * x_re[k];
    }
}

double norm_sq_scalar(const double* re, const double* im, std::size_t n) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += re[k] * re[k] + im[k] * im[k];
    return sum;
}

double max_abs_diff_scalar(const double* a_re, const double* a_im, const double* b_re,
                           const double* b_im, std::size_t n) {
    // Max of squared moduli, one sqrt at the end, same as the vector variant.
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dr = a_re[k] - b_re[k];
        const double di = a_im[k] - b_im[k];
        const double d2 = dr * dr + di * di;
        if (std::isnan(d2)) return d2;
        if (d2 > worst) worst = d2;
    }
    return std::sqrt(worst);
}

}  // namespace linopt::simd::detail
