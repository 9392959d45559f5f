// Scalar and SIMD kernel variants must agree.
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "linopt/simd/kernels.hpp"

using namespace linopt::simd;

namespace {

struct Data {
    std::vector<double> are, aim, bre, bim;
};

Data make_data(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Data d;
    for (auto* v : {&d.are, &d.aim, &d.bre, &d.bim}) {
        v->resize(n);
        for (auto& x : *v) x = u(rng);
    }
    return d;
}

std::vector<const KernelTable*> variants() {
    std::vector<const KernelTable*> out{&scalar_table()};
    if (const KernelTable* t = avx2_table()) out.push_back(t);
    return out;
}

// Lengths that exercise the unrolled body and every remainder.
const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 1365};

}  // namespace

TEST(kernels, active_table_is_a_known_variant) {
    const KernelTable& t = active();
    EXPECT_TRUE(t.isa == Isa::Scalar || t.isa == Isa::Avx2);
    EXPECT_FALSE(isa_name(t.isa).empty());
}

TEST(kernels, scalar_cdot_matches_definition) {
    const double are[] = {1, 0}, aim[] = {0, 1}, bre[] = {2, 3}, bim[] = {1, -1};
    // conj(1)(2+i) + conj(i)(3-i) = 2+i + (-i)(3-i) = 2+i -3i -1 = 1-2i
    const Cplx d = scalar_table().cdot(are, aim, bre, bim, 2);
    EXPECT_DOUBLE_EQ(d.re, 1.0);
    EXPECT_DOUBLE_EQ(d.im, -2.0);
}

TEST(kernels, cdot_variants_agree) {
    for (std::size_t n : kLengths) {
        const Data d = make_data(n, 100 + n);
        const Cplx ref = scalar_table().cdot(d.are.data(), d.aim.data(), d.bre.data(), d.bim.data(), n);
        for (const KernelTable* t : variants()) {
            const Cplx got = t->cdot(d.are.data(), d.aim.data(), d.bre.data(), d.bim.data(), n);
            const double tol = 1e-15 * (n + 1);
            EXPECT_NEAR(got.re, ref.re, tol) << isa_name(t->isa) << " n=" << n;
            EXPECT_NEAR(got.im, ref.im, tol) << isa_name(t->isa) << " n=" << n;
        }
    }
}

TEST(kernels, caxpy_variants_agree) {
    for (std::size_t n : kLengths) {
        const Data d = make_data(n, 200 + n);
        const Cplx alpha{0.3, -1.1};
        std::vector<double> ref_re = d.bre, ref_im = d.bim;
        scalar_table().caxpy(alpha, d.are.data(), d.aim.data(), ref_re.data(), ref_im.data(), n);
        for (const KernelTable* t : variants()) {
            std::vector<double> yre = d.bre, yim = d.bim;
            t->caxpy(alpha, d.are.data(), d.aim.data(), yre.data(), yim.data(), n);
            for (std::size_t k = 0; k < n; ++k) {
                EXPECT_NEAR(yre[k], ref_re[k], 1e-15) << isa_name(t->isa);
                EXPECT_NEAR(yim[k], ref_im[k], 1e-15) << isa_name(t->isa);
            }
        }
    }
}

TEST(kernels, norm_sq_variants_agree) {
    for (std::size_t n : kLengths) {
        const Data d = make_data(n, 300 + n);
        const double ref = scalar_table().norm_sq(d.are.data(), d.aim.data(), n);
        for (const KernelTable* t : variants()) {
            EXPECT_NEAR(t->norm_sq(d.are.data(), d.aim.data(), n), ref, 1e-15 * (n + 1)) << isa_name(t->isa);
        }
    }
}

TEST(kernels, max_abs_diff_variants_agree_exactly) {
    for (std::size_t n : kLengths) {
        const Data d = make_data(n, 400 + n);
        const double ref = scalar_table().max_abs_diff(d.are.data(), d.aim.data(), d.bre.data(), d.bim.data(), n);
        for (const KernelTable* t : variants()) {
            EXPECT_EQ(t->max_abs_diff(d.are.data(), d.aim.data(), d.bre.data(), d.bim.data(), n), ref)
                << isa_name(t->isa) << " n=" << n;
        }
    }
}

TEST(kernels, max_abs_diff_propagates_nan) {
    for (std::size_t n : {3u, 8u, 13u}) {
        Data d = make_data(n, 500 + n);
        d.aim[n / 2] = std::numeric_limits<double>::quiet_NaN();
        for (const KernelTable* t : variants()) {
            EXPECT_TRUE(std::isnan(t->max_abs_diff(d.are.data(), d.aim.data(), d.bre.data(), d.bim.data(), n)))
                << isa_name(t->isa) << " n=" << n;
        }
    }
}
