#include "kernels_impl.hpp"

#include <cstdlib>
#include <string_view>

namespace bhcp::kernels {

const KernelTable* avx2_table() noexcept
{
#if defined(BHCP_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &detail::avx2_table_unchecked() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept
{
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("BHCP_KERNELS");
        if (env && std::string_view(env) == "scalar") return scalar_table();
        if (const KernelTable* t = avx2_table()) return *t;
        return scalar_table();
    }();
    return chosen;
}

}  // namespace bhcp::kernels
