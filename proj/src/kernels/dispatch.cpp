#include "stabilitylab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace stab::kern {
namespace {

const KernelTable& select() {
    const char* force = std::getenv("STABILITYLAB_KERNELS");
    if (force && std::strcmp(force, "scalar") == 0) return scalar_table();
#if defined(STAB_HAVE_AVX2_TU)
    if (force && std::strcmp(force, "avx2") == 0)
        return cpu_has_avx2() ? avx2_table() : scalar_table();
    if (cpu_has_avx2()) return avx2_table();
#endif
    return scalar_table();
}

} // namespace

const KernelTable& active_table() {
    static const KernelTable& t = select();
    return t;
}

} // namespace stab::kern
