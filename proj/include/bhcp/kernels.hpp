#pragma once

// Elementwise inner loops shared by the solvers. Each kernel has a scalar
// reference implementation and, where the build and CPU allow it, an AVX2/FMA
// variant. The active table is chosen once at startup; tests may request a
// specific table to check the variants against each other.

#include <complex>
#include <cstddef>
#include <string_view>

namespace bhcp::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    std::string_view name;

    // x[i] *= s
    void (*scale)(cplx* x, std::size_t n, cplx s);

    // out[i] = s * in[i], real input promoted to complex
    void (*promote_scale)(const double* in, cplx* out, std::size_t n, cplx s);

    // out[i] = Re(s * in[i]); returns sum of Im(s * in[i])^2
    double (*scale_real_part)(const cplx* in, double* out, std::size_t n, cplx s);

    // x[i] /= (s + mu[i])
    void (*shifted_divide)(cplx* x, const double* mu, std::size_t n, cplx s);

    // out[i] = c * (mid[i-1] + mid[i+1] + lo[i] + hi[i]) - diag * mid[i]
    // with zero Dirichlet values past both ends; lo / hi may be null.
    void (*stencil_row)(double* out, const double* mid, const double* lo, const double* hi,
                        std::size_t n, double c, double diag);

    // sum_i (a[i] - b[i])^2
    double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// Null when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

// Table used by the library. AVX2 when available unless the environment
// variable BHCP_KERNELS=scalar is set.
const KernelTable& active() noexcept;

}  // namespace bhcp::kernels
