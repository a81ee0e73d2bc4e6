#include "dga/kernels.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace dga::kernels {

#ifdef DGA_BUILD_AVX2
const Ops* avx2_ops_impl(); // kernels_avx2.cpp
#endif

bool cpu_has_avx2() {
#if defined(DGA_BUILD_AVX2) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* avx2_ops() {
#ifdef DGA_BUILD_AVX2
    if (cpu_has_avx2()) return avx2_ops_impl();
#endif
    return nullptr;
}

namespace {

const Ops& select_backend() {
    const char* forced = std::getenv("DGA_KERNELS");
    if (forced != nullptr) {
        if (std::strcmp(forced, "scalar") == 0) return scalar_ops();
        if (std::strcmp(forced, "avx2") == 0) {
            if (const Ops* o = avx2_ops()) return *o;
            std::fprintf(stderr, "dga: DGA_KERNELS=avx2 requested but AVX2 is "
                                 "unavailable, using scalar kernels\n");
            return scalar_ops();
        }
        std::fprintf(stderr, "dga: unknown DGA_KERNELS value '%s', "
                             "using runtime detection\n", forced);
    }
    if (const Ops* o = avx2_ops()) return *o;
    return scalar_ops();
}

} // namespace

const Ops& ops() {
    static const Ops& selected = select_backend();
    return selected;
}

} // namespace dga::kernels
