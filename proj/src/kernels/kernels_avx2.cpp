#include "kernels_impl.hpp"

#include <immintrin.h>

namespace bhcp::kernels {

namespace {

// Two complex doubles per __m256d, interleaved [re0, im0, re1, im1].

inline __m256d cmul_scalar(__m256d v, __m256d sr, __m256d si)
{
    const __m256d sw = _mm256_permute_pd(v, 0b0101);
    return _mm256_fmaddsub_pd(v, sr, _mm256_mul_pd(sw, si));
}

void scale_avx2(cplx* x, std::size_t n, cplx s)
{
    auto* p = reinterpret_cast<double*>(x);
    const __m256d sr = _mm256_set1_pd(s.real());
    const __m256d si = _mm256_set1_pd(s.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(p + 2 * i);
        _mm256_storeu_pd(p + 2 * i, cmul_scalar(v, sr, si));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        x[i] = cplx(xr * s.real() - xi * s.imag(), xi * s.real() + xr * s.imag());
    }
}

void promote_scale_avx2(const double* in, cplx* out, std::size_t n, cplx s)
{
    auto* p = reinterpret_cast<double*>(out);
    const __m256d sv = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(in + i);
        const __m256d lo = _mm256_permute4x64_pd(v, 0b01010000);
        const __m256d hi = _mm256_permute4x64_pd(v, 0b11111010);
        _mm256_storeu_pd(p + 2 * i, _mm256_mul_pd(lo, sv));
        _mm256_storeu_pd(p + 2 * i + 4, _mm256_mul_pd(hi, sv));
    }
    for (; i < n; ++i)
        out[i] = cplx(in[i] * s.real(), in[i] * s.imag());
}

double scale_real_part_avx2(const cplx* in, double* out, std::size_t n, cplx s)
{
    const auto* p = reinterpret_cast<const double*>(in);
    const __m256d sr = _mm256_set1_pd(s.real());
    const __m256d si = _mm256_set1_pd(s.imag());
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = cmul_scalar(_mm256_loadu_pd(p + 2 * i), sr, si);
        const __m256d b = cmul_scalar(_mm256_loadu_pd(p + 2 * i + 4), sr, si);
        const __m256d re = _mm256_permute4x64_pd(_mm256_unpacklo_pd(a, b), 0b11011000);
        const __m256d im = _mm256_unpackhi_pd(a, b);
        _mm256_storeu_pd(out + i, re);
        acc = _mm256_fmadd_pd(im, im, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double imag_sq = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        const double xr = in[i].real(), xi = in[i].imag();
        out[i] = xr * s.real() - xi * s.imag();
        const double im = xi * s.real() + xr * s.imag();
        imag_sq += im * im;
    }
    return imag_sq;
}

void shifted_divide_avx2(cplx* x, const double* mu, std::size_t n, cplx s)
{
    auto* p = reinterpret_cast<double*>(x);
    const __m256d sr = _mm256_set1_pd(s.real());
    const __m256d si = _mm256_set1_pd(s.imag());
    const __m256d si_signed = _mm256_setr_pd(s.imag(), -s.imag(), s.imag(), -s.imag());
    const __m256d si_sq = _mm256_mul_pd(si, si);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m128d m2 = _mm_loadu_pd(mu + i);
        const __m256d m = _mm256_permute4x64_pd(_mm256_castpd128_pd256(m2), 0b01010000);
        const __m256d qr = _mm256_add_pd(sr, m);
        const __m256d den = _mm256_fmadd_pd(qr, qr, si_sq);
        const __m256d v = _mm256_loadu_pd(p + 2 * i);
        const __m256d sw = _mm256_permute_pd(v, 0b0101);
        // [xr*qr + xi*si, xi*qr - xr*si]
        const __m256d num = _mm256_fmadd_pd(sw, si_signed, _mm256_mul_pd(v, qr));
        _mm256_storeu_pd(p + 2 * i, _mm256_div_pd(num, den));
    }
    for (; i < n; ++i) {
        const double qr = s.real() + mu[i];
        const double den = qr * qr + s.imag() * s.imag();
        const double xr = x[i].real(), xi = x[i].imag();
        x[i] = cplx((xr * qr + xi * s.imag()) / den, (xi * qr - xr * s.imag()) / den);
    }
}

inline double stencil_point(const double* mid, const double* lo, const double* hi, std::size_t i,
                            std::size_t n, double c, double diag)
{
    double nb = (i > 0 ? mid[i - 1] : 0.0) + (i + 1 < n ? mid[i + 1] : 0.0);
    if (lo) nb += lo[i];
    if (hi) nb += hi[i];
    return c * nb - diag * mid[i];
}

void stencil_row_avx2(double* out, const double* mid, const double* lo, const double* hi,
                      std::size_t n, double c, double diag)
{
    if (n < 6) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = stencil_point(mid, lo, hi, i, n, c, diag);
        return;
    }
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d dv = _mm256_set1_pd(diag);
    out[0] = stencil_point(mid, lo, hi, 0, n, c, diag);
    std::size_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        __m256d nb = _mm256_add_pd(_mm256_loadu_pd(mid + i - 1), _mm256_loadu_pd(mid + i + 1));
        if (lo) nb = _mm256_add_pd(nb, _mm256_loadu_pd(lo + i));
        if (hi) nb = _mm256_add_pd(nb, _mm256_loadu_pd(hi + i));
        const __m256d centre = _mm256_mul_pd(dv, _mm256_loadu_pd(mid + i));
        _mm256_storeu_pd(out + i, _mm256_fmsub_pd(cv, nb, centre));
    }
    for (; i < n; ++i)
        out[i] = stencil_point(mid, lo, hi, i, n, c, diag);
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

}  // namespace

namespace detail {

const KernelTable& avx2_table_unchecked() noexcept
{
    static const KernelTable table{
        "avx2",
        scale_avx2,
        promote_scale_avx2,
        scale_real_part_avx2,
        shifted_divide_avx2,
        stencil_row_avx2,
        sum_sq_diff_avx2,
    };
    return table;
}

}  // namespace detail

}  // namespace bhcp::kernels
