#include "kernels_impl.hpp"

namespace bhcp::kernels {

namespace {

void scale_scalar(cplx* x, std::size_t n, cplx s)
{
    const double sr = s.real(), si = s.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        x[i] = cplx(xr * sr - xi * si, xi * sr + xr * si);
    }
}

void promote_scale_scalar(const double* in, cplx* out, std::size_t n, cplx s)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] = cplx(in[i] * s.real(), in[i] * s.imag());
}

double scale_real_part_scalar(const cplx* in, double* out, std::size_t n, cplx s)
{
    const double sr = s.real(), si = s.imag();
    double imag_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = in[i].real(), xi = in[i].imag();
        out[i] = xr * sr - xi * si;
        const double im = xi * sr + xr * si;
        imag_sq += im * im;
    }
    return imag_sq;
}

void shifted_divide_scalar(cplx* x, const double* mu, std::size_t n, cplx s)
{
    const double si = s.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double qr = s.real() + mu[i];
        const double den = qr * qr + si * si;
        const double xr = x[i].real(), xi = x[i].imag();
        x[i] = cplx((xr * qr + xi * si) / den, (xi * qr - xr * si) / den);
    }
}

void stencil_row_scalar(double* out, const double* mid, const double* lo, const double* hi,
                        std::size_t n, double c, double diag)
{
    for (std::size_t i = 0; i < n; ++i) {
        double nb = (i > 0 ? mid[i - 1] : 0.0) + (i + 1 < n ? mid[i + 1] : 0.0);
        if (lo) nb += lo[i];
        if (hi) nb += hi[i];
        out[i] = c * nb - diag * mid[i];
    }
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

}  // namespace

const KernelTable& scalar_table() noexcept
{
    static const KernelTable table{
        "scalar",
        scale_scalar,
        promote_scale_scalar,
        scale_real_part_scalar,
        shifted_divide_scalar,
        stencil_row_scalar,
        sum_sq_diff_scalar,
    };
    return table;
}

}  // namespace bhcp::kernels
