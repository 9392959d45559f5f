// Split-complex vector kernels used by the dense oracle.
//
// Vectors are stored as separate real and imaginary arrays so the inner
// loops map directly onto packed double lanes. Each ISA provides the same
// table; `active()` picks the widest one the CPU supports at first use.
// Setting LINOPT_SIMD=scalar in the environment forces the reference path.

#pragma once

#include <cstddef>
#include <string_view>

namespace linopt::simd {

// Plain aggregate so that ISA-specific translation units do not emit
// out-of-line copies of std::complex members.
struct Cplx {
    double re;
    double im;
};

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;
    // sum_k conj(a_k) * b_k
    Cplx (*cdot)(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                 std::size_t n);
    // y += alpha * x
    void (*caxpy)(Cplx alpha, const double* x_re, const double* x_im, double* y_re, double* y_im,
                  std::size_t n);
    // sum_k |a_k|^2
    double (*norm_sq)(const double* re, const double* im, std::size_t n);
    // max_k |a_k - b_k|
    double (*max_abs_diff)(const double* a_re, const double* a_im, const double* b_re,
                           const double* b_im, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the library was built without the AVX2 translation unit or
// the running CPU lacks AVX2+FMA.
const KernelTable* avx2_table() noexcept;

const KernelTable& active() noexcept;

std::string_view isa_name(Isa isa) noexcept;

namespace detail {
Cplx cdot_scalar(const double*, const double*, const double*, const double*, std::size_t);
void caxpy_scalar(Cplx, const double*, const double*, double*, double*, std::size_t);
double norm_sq_scalar(const double*, const double*, std::size_t);
double max_abs_diff_scalar(const double*, const double*, const double*, const double*, std::size_t);

Cplx cdot_avx2(const double*, const double*, const double*, const double*, std::size_t);
void caxpy_avx2(Cplx, const double*, const double*, double*, double*, std::size_t);
double norm_sq_avx2(const double*, const double*, std::size_t);
double max_abs_diff_avx2(const double*, const double*, const double*, const double*, std::size_t);
}  // namespace detail

}  // namespace linopt::simd
