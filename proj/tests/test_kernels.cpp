#include "bhcp/kernels.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

using bhcp::kernels::cplx;
using bhcp::kernels::KernelTable;

namespace {

std::vector<cplx> random_complex(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& x : v) x = {u(rng), u(rng)};
    return v;
}

std::vector<double> random_real(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// Lengths around the vector width, including remainders.
constexpr std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 15, 16, 17, 63, 64, 65, 1023};

class KernelEquivalence : public ::testing::Test {
protected:
    void SetUp() override
    {
        simd_ = bhcp::kernels::avx2_table();
        if (!simd_) GTEST_SKIP() << "AVX2 kernels unavailable";
    }
    const KernelTable& ref_ = bhcp::kernels::scalar_table();
    const KernelTable* simd_ = nullptr;
    std::mt19937_64 rng_{42};
};

// FMA contraction differs from separate multiply-add by at most a few ulps.
constexpr double kTol = 1e-14;

}  // namespace

TEST(Kernels, ActiveTableHasAllEntries)
{
    const KernelTable& k = bhcp::kernels::active();
    EXPECT_FALSE(k.name.empty());
    EXPECT_NE(k.scale, nullptr);
    EXPECT_NE(k.promote_scale, nullptr);
    EXPECT_NE(k.scale_real_part, nullptr);
    EXPECT_NE(k.shifted_divide, nullptr);
    EXPECT_NE(k.stencil_row, nullptr);
    EXPECT_NE(k.sum_sq_diff, nullptr);
}

TEST(Kernels, ScalarStencilMatchesDefinition)
{
    const auto& k = bhcp::kernels::scalar_table();
    const std::vector<double> mid{1, 2, 3, 4}, lo{10, 20, 30, 40}, hi{-1, -2, -3, -4};
    std::vector<double> out(4);
    k.stencil_row(out.data(), mid.data(), lo.data(), hi.data(), 4, 2.0, 8.0);
    // 2 * (left + right + lo + hi) - 8 * mid
    EXPECT_DOUBLE_EQ(out[0], 2.0 * (0 + 2 + 10 - 1) - 8.0);
    EXPECT_DOUBLE_EQ(out[1], 2.0 * (1 + 3 + 20 - 2) - 16.0);
    EXPECT_DOUBLE_EQ(out[3], 2.0 * (3 + 0 + 40 - 4) - 32.0);
    k.stencil_row(out.data(), mid.data(), nullptr, nullptr, 4, 1.0, 2.0);
    EXPECT_DOUBLE_EQ(out[0], 0.0);
    EXPECT_DOUBLE_EQ(out[3], -5.0);
}

TEST_F(KernelEquivalence, Scale)
{
    const cplx s{0.7, -1.3};
    for (std::size_t n : kLengths) {
        auto a = random_complex(n, rng_);
        auto b = a;
        ref_.scale(a.data(), n, s);
        simd_->scale(b.data(), n, s);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, kTol) << n << ' ' << i;
    }
}

TEST_F(KernelEquivalence, PromoteScale)
{
    const cplx s{-0.25, 2.5};
    for (std::size_t n : kLengths) {
        const auto in = random_real(n, rng_);
        std::vector<cplx> a(n), b(n);
        ref_.promote_scale(in.data(), a.data(), n, s);
        simd_->promote_scale(in.data(), b.data(), n, s);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, kTol) << n << ' ' << i;
    }
}

TEST_F(KernelEquivalence, ScaleRealPart)
{
    const cplx s{1.1, 0.4};
    for (std::size_t n : kLengths) {
        const auto in = random_complex(n, rng_);
        std::vector<double> a(n), b(n);
        const double ia = ref_.scale_real_part(in.data(), a.data(), n, s);
        const double ib = simd_->scale_real_part(in.data(), b.data(), n, s);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[i], kTol) << n << ' ' << i;
        EXPECT_NEAR(ia, ib, kTol * (1.0 + ia));
    }
}

TEST_F(KernelEquivalence, ShiftedDivide)
{
    const cplx s{3.0, -2.0};
    for (std::size_t n : kLengths) {
        auto a = random_complex(n, rng_);
        auto b = a;
        auto mu = random_real(n, rng_);
        for (auto& m : mu) m = 10.0 * (m + 1.0);
        ref_.shifted_divide(a.data(), mu.data(), n, s);
        simd_->shifted_divide(b.data(), mu.data(), n, s);
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_NEAR(std::abs(a[i] - b[i]), 0.0, kTol * std::abs(a[i]) + 1e-300) << n << ' ' << i;
    }
}

TEST_F(KernelEquivalence, StencilRow)
{
    for (std::size_t n : kLengths) {
        const auto mid = random_real(n, rng_), lo = random_real(n, rng_), hi = random_real(n, rng_);
        std::vector<double> a(n), b(n);
        for (const double* l : {lo.data(), static_cast<const double*>(nullptr)}) {
            for (const double* u : {hi.data(), static_cast<const double*>(nullptr)}) {
                ref_.stencil_row(a.data(), mid.data(), l, u, n, 3.5, 14.0);
                simd_->stencil_row(b.data(), mid.data(), l, u, n, 3.5, 14.0);
                for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[i], 1e-13) << n << ' ' << i;
            }
        }
    }
}

TEST_F(KernelEquivalence, SumSqDiff)
{
    for (std::size_t n : kLengths) {
        const auto x = random_real(n, rng_), y = random_real(n, rng_);
        const double a = ref_.sum_sq_diff(x.data(), y.data(), n);
        const double b = simd_->sum_sq_diff(x.data(), y.data(), n);
        EXPECT_NEAR(a, b, 1e-13 * (1.0 + a)) << n;
    }
}
