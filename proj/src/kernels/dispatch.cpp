#include "cavityflow/kernels.hpp"

#include <spdlog/spdlog.h>

#include <cstdlib>
#include <string_view>

namespace cavityflow::kernels {

#if defined(CAVITYFLOW_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(CAVITYFLOW_HAVE_AVX2)
    static const bool supported =
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() {
    static const KernelTable& chosen = [&]() -> const KernelTable& {
        const char* env = std::getenv("CAVITYFLOW_KERNELS");
        const std::string_view want = env ? env : "auto";
        if (want == "scalar") return scalar_kernels();
        if (const KernelTable* avx2 = avx2_kernels()) return *avx2;
        if (want == "avx2") spdlog::warn("AVX2 kernels requested but unavailable; using scalar");
        return scalar_kernels();
    }();
    return chosen;
}

}  // namespace cavityflow::kernels
