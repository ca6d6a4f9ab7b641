#pragma once

#include "bhcp/kernels.hpp"

namespace bhcp::kernels::detail {

#if defined(BHCP_HAVE_AVX2)
const KernelTable& avx2_table_unchecked() noexcept;
#endif

}  // namespace bhcp::kernels::detail
