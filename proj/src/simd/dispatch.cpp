#include <cstdlib>
#include <cstring>

#include "linopt/simd/kernels.hpp"

namespace linopt::simd {

namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(LINOPT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable kScalar{
    Isa::Scalar,
    detail::cdot_scalar,
    detail::caxpy_scalar,
    detail::norm_sq_scalar,
    detail::max_abs_diff_scalar,
};

#if defined(LINOPT_HAVE_AVX2)
const KernelTable kAvx2{
    Isa::Avx2,
    detail::cdot_avx2,
    detail::caxpy_avx2,
    detail::norm_sq_avx2,
    detail::max_abs_diff_avx2,
};
#endif

const KernelTable& select() noexcept {
    if (const char* forced = std::getenv("LINOPT_SIMD"); forced && std::strcmp(forced, "scalar") == 0) {
        return kScalar;
    }
    if (const KernelTable* t = avx2_table()) return *t;
    return kScalar;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(LINOPT_HAVE_AVX2)
    static const bool ok = cpu_has_avx2_fma();
    return ok ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

}  // namespace linopt::simd
