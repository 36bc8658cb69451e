#include "qoc/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace qoc::kernels {

#ifdef QOC_HAVE_AVX2
bool avx2_supported() { return __builtin_cpu_supports("avx2"); }
#else
bool avx2_supported() { return false; }
const Ops& avx2_ops() { return scalar_ops(); }
#endif

const Ops& active() {
    static const Ops* selected = [] {
        const char* env = std::getenv("QOC_KERNELS");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_ops();
        if (env && std::strcmp(env, "avx2") == 0 && avx2_supported())
            return &avx2_ops();
        if (env && std::strcmp(env, "avx2") == 0) return &scalar_ops();
        return avx2_supported() ? &avx2_ops() : &scalar_ops();
    }();
    return *selected;
}

}  // namespace qoc::kernels
