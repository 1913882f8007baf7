#include "cfak/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace cfak::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops* avx2_impl(); // defined in kernels_avx2.cpp

const Ops* avx2() {
    static const Ops* ops = []() -> const Ops* {
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
            return avx2_impl();
        }
        return nullptr;
    }();
    return ops;
}
#else
const Ops* avx2() { return nullptr; }
#endif

namespace {

const Ops& choose() {
    if (const char* env = std::getenv("CFAK_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return scalar();
        if (std::strcmp(env, "avx2") == 0) {
            if (const Ops* ops = avx2()) return *ops;
            throw std::runtime_error("CFAK_KERNELS=avx2 but AVX2 is unavailable");
        }
        throw std::runtime_error("CFAK_KERNELS must be 'scalar' or 'avx2'");
    }
    if (const Ops* ops = avx2()) return *ops;
    return scalar();
}

} // namespace

const Ops& active() {
    static const Ops& chosen = choose();
    return chosen;
}

} // namespace cfak::kernels
