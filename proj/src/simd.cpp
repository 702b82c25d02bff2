#include "monoband/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace monoband::simd {

#if defined(MONOBAND_BUILD_AVX2)
const Ops* avx2_ops_internal();  // defined in simd_avx2.cpp
#endif

const Ops* avx2_ops_if_supported() {
#if defined(MONOBAND_BUILD_AVX2)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return avx2_ops_internal();
#endif
    return nullptr;
}

const Ops& active_ops() {
    static const Ops* chosen = [] {
        const char* forced = std::getenv("MONOBAND_SIMD");
        if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return &scalar_ops();
        const Ops* avx2 = avx2_ops_if_supported();
        if (forced != nullptr && std::strcmp(forced, "avx2") == 0 && avx2 != nullptr)
            return avx2;
        return avx2 != nullptr ? avx2 : &scalar_ops();
    }();
    return *chosen;
}

}  // namespace monoband::simd
