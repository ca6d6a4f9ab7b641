#include "bhcp/time_circulant.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

using namespace bhcp;

namespace {

constexpr double kOmegas[] = {-1e4, -1.0, -1e-4, 2.0};
constexpr std::size_t kLevels[] = {2, 3, 4, 8, 16};

Eigen::MatrixXd random_block(std::size_t rows, std::size_t nt, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd x(rows, nt);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = u(rng);
    return x;
}

// Parlett-Reinsch diagonal similarity scaling (radix 2), as done by LAPACK
// before a nonsymmetric eigensolve. Leaves the spectrum unchanged.
Eigen::MatrixXd balance(Eigen::MatrixXd a)
{
    const Eigen::Index n = a.rows();
    for (bool converged = false; !converged;) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2) { c *= 2; r /= 2; f *= 2; }
            while (c >= r * 2) { c /= 2; r *= 2; f /= 2; }
            if ((c + r) < 0.95 * s) {
                converged = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
    return a;
}

// Greedy nearest matching of two eigenvalue multisets; returns the worst gap.
double multiset_gap(std::vector<cplx> a, std::vector<cplx> b)
{
    double worst = 0.0;
    for (cplx x : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [x](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

}  // namespace

TEST(TimeGrid, Basics)
{
    const auto t = TimeGrid::build(1.0, 64);
    EXPECT_DOUBLE_EQ(t.tau(), 1.0 / 64);
    EXPECT_EQ(t.levels(), 65u);
    EXPECT_NEAR(t.tau() * t.steps(), t.final_time(), 1e-15);
    EXPECT_THROW(TimeGrid::build(1.0, 0), std::invalid_argument);
    EXPECT_THROW(TimeGrid::build(0.0, 4), std::invalid_argument);
}

TEST(Comega, TwoByTwo)
{
    const Eigen::MatrixXd c = build_comega(2, 2.0);
    Eigen::Matrix2d ref;
    ref << 1, -2, -1, 1;
    EXPECT_EQ((c - ref).norm(), 0.0);
}

TEST(Comega, FirstColumnAndStructure)
{
    const auto c1 = comega_first_column(3);
    EXPECT_EQ(c1, (std::vector<double>{1, -1, 0}));
    const Eigen::MatrixXd c = build_comega(5, -0.5);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 5; ++j) {
            double e = 0.0;
            if (i == j) e = 1.0;
            else if (i == j + 1) e = -1.0;
            else if (i == 0 && j == 4) e = 0.5;
            EXPECT_EQ(c(i, j), e);
        }
}

TEST(Comega, RejectsBadInput)
{
    EXPECT_THROW(build_comega(4, 0.0), std::invalid_argument);
    EXPECT_THROW(build_comega(1, 1.0), std::invalid_argument);
}

TEST(Diagonalize, TwoByTwoEigenvalues)
{
    const auto d = diagonalize(2, 2.0);
    std::vector<cplx> ev(d.eigenvalues().begin(), d.eigenvalues().end());
    EXPECT_LE(multiset_gap(ev, {1.0 - std::sqrt(2.0), 1.0 + std::sqrt(2.0)}), 1e-14);
}

TEST(Diagonalize, GammaIsPrincipalRoot)
{
    const auto d = diagonalize(4, -16.0);
    const auto g = d.gamma();
    EXPECT_EQ(g[0], cplx(1.0));
    for (std::size_t j = 0; j < 4; ++j) {
        const cplx ref = std::pow(2.0, static_cast<double>(j)) * std::polar(1.0, M_PI * j / 4.0);
        EXPECT_NEAR(std::abs(g[j] - ref), 0.0, 1e-13);
    }
}

TEST(Diagonalize, TracePreserved)
{
    for (double w : kOmegas)
        for (std::size_t nt : kLevels) {
            const auto d = diagonalize(nt, w);
            cplx sum = 0.0;
            for (cplx x : d.eigenvalues()) sum += x;
            EXPECT_NEAR(std::abs(sum - static_cast<double>(nt)), 0.0, 1e-10 * nt) << w << ' ' << nt;
        }
}

TEST(Diagonalize, MatchesDenseEigensolve)
{
    for (double w : kOmegas)
        for (std::size_t nt : kLevels) {
            const auto d = diagonalize(nt, w);
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(balance(build_comega(nt, w)).cast<cplx>());
            std::vector<cplx> dense(es.eigenvalues().data(), es.eigenvalues().data() + nt);
            std::vector<cplx> ours(d.eigenvalues().begin(), d.eigenvalues().end());
            EXPECT_LE(multiset_gap(ours, dense), 1e-10) << w << ' ' << nt;
        }
}

TEST(Diagonalize, DenseReconstruction)
{
    for (double w : kOmegas)
        for (std::size_t nt : kLevels) {
            const auto d = diagonalize(nt, w);
            const Eigen::MatrixXcd v = d.dense_v(), vi = d.dense_v_inverse();
            const Eigen::VectorXcd ev = Eigen::Map<const Eigen::VectorXcd>(d.eigenvalues().data(), nt);
            const Eigen::MatrixXcd rec = v * ev.asDiagonal() * vi;
            const Eigen::MatrixXd c = build_comega(nt, w);
            EXPECT_LE((rec - c.cast<cplx>()).norm() / c.norm(), 1e-10 * d.gamma_condition()) << w << ' ' << nt;
            EXPECT_LE((v * vi - Eigen::MatrixXcd::Identity(nt, nt)).norm(), 1e-12 * d.gamma_condition());
        }
    const auto d = diagonalize(4, -1.0);
    const Eigen::VectorXcd ev = Eigen::Map<const Eigen::VectorXcd>(d.eigenvalues().data(), 4);
    EXPECT_LE((d.dense_v() * ev.asDiagonal() * d.dense_v_inverse() - build_comega(4, -1.0).cast<cplx>()).norm(),
              1e-12);
}

TEST(Diagonalize, GammaCondition)
{
    EXPECT_NEAR(diagonalize(5, -1e4).gamma_condition(), std::pow(1e4, 0.8), 1e-9);
    EXPECT_NEAR(diagonalize(5, -1e-4).gamma_condition(), std::pow(1e4, 0.8), 1e-9);
    EXPECT_NEAR(diagonalize(5, -1.0).gamma_condition(), 1.0, 1e-15);
}

TEST(TimeTransform, ZeroMapsToZero)
{
    TimeTransform tt(std::make_shared<CirculantDiagonalization>(6, -3.0), 5);
    const std::vector<double> in(30, 0.0);
    std::vector<cplx> out(30, cplx(1.0));
    tt.to_eigenspace(in, out);
    for (cplx x : out) EXPECT_EQ(x, cplx(0.0));
}

TEST(TimeTransform, MatchesDenseProducts)
{
    for (double w : kOmegas)
        for (std::size_t nt : {4u, 7u, 16u}) {
            for (std::size_t rows : {1u, 3u, 70u}) {
                auto diag = std::make_shared<CirculantDiagonalization>(nt, w);
                TimeTransform tt(diag, rows);
                const Eigen::MatrixXd x = random_block(rows, nt, rows * 100 + nt);
                const double cond = diag->gamma_condition();

                std::vector<cplx> s1(rows * nt);
                tt.to_eigenspace(std::span<const double>(x.data(), x.size()), s1);
                const Eigen::MatrixXcd ref_a = x.cast<cplx>() * diag->dense_v_inverse().transpose();
                const Eigen::Map<const Eigen::MatrixXcd> got_a(s1.data(), rows, nt);
                EXPECT_LE((got_a - ref_a).norm(), 1e-12 * cond * ref_a.norm()) << w << ' ' << nt << ' ' << rows;

                // A block whose V^T product is real: S = X V^{-T}.
                Eigen::MatrixXcd s2 = ref_a;
                std::vector<cplx> buf(s2.data(), s2.data() + s2.size());
                std::vector<double> back(rows * nt);
                const double residue = tt.from_eigenspace(buf, back, 1, 1e-6);
                EXPECT_LE(residue, 1e-12 * cond * cond);
                const Eigen::Map<const Eigen::MatrixXd> got_c(back.data(), rows, nt);
                EXPECT_LE((got_c - x).norm(), 1e-10 * cond * x.norm()) << w << ' ' << nt << ' ' << rows;

                const Eigen::MatrixXcd z = Eigen::MatrixXcd::Random(rows, nt);
                std::vector<cplx> zb(z.data(), z.data() + z.size());
                tt.from_eigenspace(std::span<cplx>(zb));
                const Eigen::MatrixXcd ref_c = z * diag->dense_v().transpose();
                const Eigen::Map<const Eigen::MatrixXcd> got_z(zb.data(), rows, nt);
                EXPECT_LE((got_z - ref_c).norm(), 1e-12 * cond * ref_c.norm());
            }
        }
}

TEST(TimeTransform, OmegaOneIsPlainDft)
{
    const std::size_t nt = 8;
    TimeTransform tt(std::make_shared<CirculantDiagonalization>(nt, 1.0), 1);
    const Eigen::MatrixXd x = random_block(1, nt, 5);
    std::vector<cplx> out(nt);
    tt.to_eigenspace(std::span<const double>(x.data(), nt), out);
    for (std::size_t k = 0; k < nt; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < nt; ++j) s += x(0, j) * std::polar(1.0, 2.0 * M_PI * j * k / nt);
        EXPECT_NEAR(std::abs(out[k] - s / std::sqrt(double(nt))), 0.0, 1e-13);
    }
    std::vector<cplx> z(out);
    tt.from_eigenspace(std::span<cplx>(z));
    for (std::size_t j = 0; j < nt; ++j) EXPECT_NEAR(std::abs(z[j] - x(0, j)), 0.0, 1e-13);
}

TEST(TimeTransform, RoundTripWithinConditioning)
{
    for (double w : kOmegas) {
        const std::size_t rows = 33, nt = 65;
        auto diag = std::make_shared<CirculantDiagonalization>(nt, w);
        TimeTransform tt(diag, rows);
        const Eigen::MatrixXd x = random_block(rows, nt, 77);
        std::vector<cplx> s(rows * nt);
        tt.to_eigenspace(std::span<const double>(x.data(), x.size()), s);
        std::vector<double> back(rows * nt);
        tt.from_eigenspace(s, back, 1, 1e-6);
        const Eigen::Map<const Eigen::MatrixXd> got(back.data(), rows, nt);
        EXPECT_LE((got - x).norm() / x.norm(), 1e-10 * std::max(std::abs(w), 1.0 / std::abs(w))) << w;
    }
}

TEST(TimeTransform, WorkerCountDoesNotChangeBits)
{
    const std::size_t rows = 300, nt = 33;
    auto diag = std::make_shared<CirculantDiagonalization>(nt, -7.0);
    TimeTransform tt(diag, rows);
    const Eigen::MatrixXd x = random_block(rows, nt, 3);
    std::vector<cplx> a(rows * nt), b(rows * nt);
    tt.to_eigenspace(std::span<const double>(x.data(), x.size()), a, 1);
    tt.to_eigenspace(std::span<const double>(x.data(), x.size()), b, 4);
    EXPECT_EQ(a, b);
    std::vector<double> ra(rows * nt), rb(rows * nt);
    tt.from_eigenspace(a, ra, 1);
    tt.from_eigenspace(b, rb, 3);
    EXPECT_EQ(ra, rb);
}

TEST(TimeTransform, LargeImaginaryResidueThrows)
{
    const std::size_t rows = 2, nt = 4;
    TimeTransform tt(std::make_shared<CirculantDiagonalization>(nt, -1.0), rows);
    std::vector<cplx> block(rows * nt, cplx(1.0, 1.0));
    std::vector<double> out(rows * nt);
    EXPECT_THROW(tt.from_eigenspace(block, out), ImaginaryResidueError);
}

TEST(TimeTransform, ShapeMismatchThrows)
{
    TimeTransform tt(std::make_shared<CirculantDiagonalization>(4, -1.0), 3);
    std::vector<double> in(11);
    std::vector<cplx> out(12);
    EXPECT_THROW(tt.to_eigenspace(in, out), std::invalid_argument);
}
