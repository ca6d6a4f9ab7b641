#include "bhcp/time_circulant.hpp"

#include "bhcp/kernels.hpp"
#include "bhcp/parallel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace bhcp {

namespace {

// Rows are always transformed in blocks of this many, whatever the worker
// count, so every row goes through the same FFTW plan and results are
// reproducible bit for bit.
constexpr std::size_t kRowBlock = 64;

std::size_t block_count(std::size_t rows) { return (rows + kRowBlock - 1) / kRowBlock; }

}  // namespace

TimeGrid TimeGrid::build(double final_time, int steps)
{
    if (!(final_time > 0.0) || !std::isfinite(final_time))
        throw std::invalid_argument("TimeGrid: final time must be positive");
    if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
    return TimeGrid(final_time, steps);
}

Eigen::MatrixXd build_comega(std::size_t levels, double omega)
{
    if (levels < 2) throw std::invalid_argument("build_comega: need N_t >= 2");
    if (omega == 0.0 || !std::isfinite(omega)) throw std::invalid_argument("build_comega: omega must be nonzero");
    const auto n = static_cast<Eigen::Index>(levels);
    Eigen::MatrixXd c = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 1; i < n; ++i) c(i, i - 1) = -1.0;
    c(0, n - 1) = -omega;
    return c;
}

std::vector<double> comega_first_column(std::size_t levels)
{
    std::vector<double> c(levels, 0.0);
    c[0] = 1.0;
    if (levels > 1) c[1] = -1.0;
    return c;
}

CirculantDiagonalization::CirculantDiagonalization(std::size_t levels, double omega)
    : levels_(levels), omega_(omega), gamma_(levels), eigenvalues_(levels)
{
    if (levels < 1) throw std::invalid_argument("diagonalize: need N_t >= 1");
    if (omega == 0.0 || !std::isfinite(omega)) throw std::invalid_argument("diagonalize: omega must be nonzero");

    const double nt = static_cast<double>(levels);
    const double arg = omega < 0.0 ? std::numbers::pi : 0.0;
    const double mag = std::abs(omega);
    for (std::size_t j = 0; j < levels; ++j) {
        const double e = static_cast<double>(j) / nt;
        gamma_[j] = std::polar(std::pow(mag, e), arg * e);
    }

    // sqrt(N_t) F G c_1 is the unnormalized e^{+i} DFT of the scaled column.
    const auto c1 = comega_first_column(levels);
    for (std::size_t j = 0; j < levels; ++j) eigenvalues_[j] = gamma_[j] * c1[j];
    if (levels == 1) eigenvalues_[0] = 1.0 - omega;  // C is the 1x1 matrix [1 - omega]
    else fft::TimeDft(1, levels).execute(eigenvalues_.data(), 0, 1, fft::Direction::backward);
}

double CirculantDiagonalization::gamma_condition() const noexcept
{
    const double mag = std::abs(omega_);
    const double nt = static_cast<double>(levels_);
    return std::pow(std::max(mag, 1.0 / mag), (nt - 1.0) / nt);
}

Eigen::MatrixXcd CirculantDiagonalization::dense_v_inverse() const
{
    const auto n = static_cast<Eigen::Index>(levels_);
    Eigen::MatrixXcd f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            f(a, b) = std::polar(scale, 2.0 * std::numbers::pi * static_cast<double>((a * b) % n) / n);
    Eigen::VectorXcd g(n);
    for (Eigen::Index j = 0; j < n; ++j) g(j) = gamma_[static_cast<std::size_t>(j)];
    return f * g.asDiagonal();
}

Eigen::MatrixXcd CirculantDiagonalization::dense_v() const
{
    const auto n = static_cast<Eigen::Index>(levels_);
    Eigen::MatrixXcd f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            f(a, b) = std::polar(scale, 2.0 * std::numbers::pi * static_cast<double>((a * b) % n) / n);
    Eigen::VectorXcd ginv(n);
    for (Eigen::Index j = 0; j < n; ++j) ginv(j) = 1.0 / gamma_[static_cast<std::size_t>(j)];
    return ginv.asDiagonal() * f.adjoint();
}

CirculantDiagonalization diagonalize(std::size_t levels, double omega)
{
    return CirculantDiagonalization(levels, omega);
}

namespace {

std::string imag_message(double ratio, double limit)
{
    std::ostringstream os;
    os << "imaginary residue " << ratio << " exceeds " << limit << " of the real part";
    return os.str();
}

}  // namespace

ImaginaryResidueError::ImaginaryResidueError(double ratio, double limit)
    : std::runtime_error(imag_message(ratio, limit)), ratio_(ratio)
{
}

TimeTransform::TimeTransform(std::shared_ptr<const CirculantDiagonalization> diag, std::size_t rows)
    : diag_(std::move(diag)), rows_(rows), dft_(rows, diag_ ? diag_->levels() : 1)
{
    if (!diag_) throw std::invalid_argument("TimeTransform: null diagonalization");
}

void TimeTransform::check(std::size_t n) const
{
    if (n != rows_ * diag_->levels()) throw std::invalid_argument("TimeTransform: shape mismatch");
}

void TimeTransform::to_eigenspace(std::span<const double> in, std::span<cplx> out, unsigned workers) const
{
    check(in.size());
    check(out.size());
    const auto& k = kernels::active();
    const std::size_t nt = diag_->levels();
    const double unit = 1.0 / std::sqrt(static_cast<double>(nt));
    const auto gamma = diag_->gamma();
    parallel_for_chunks(block_count(rows_), workers, [&](std::size_t b0, std::size_t b1) {
        for (std::size_t b = b0; b < b1; ++b) {
            const std::size_t r0 = b * kRowBlock, count = std::min(kRowBlock, rows_ - r0);
            for (std::size_t j = 0; j < nt; ++j)
                k.promote_scale(in.data() + j * rows_ + r0, out.data() + j * rows_ + r0, count, gamma[j] * unit);
            dft_.execute(out.data(), r0, count, fft::Direction::backward);
        }
    });
}

void TimeTransform::to_eigenspace(std::span<cplx> block, unsigned workers) const
{
    check(block.size());
    const auto& k = kernels::active();
    const std::size_t nt = diag_->levels();
    const double unit = 1.0 / std::sqrt(static_cast<double>(nt));
    const auto gamma = diag_->gamma();
    parallel_for_chunks(block_count(rows_), workers, [&](std::size_t b0, std::size_t b1) {
        for (std::size_t b = b0; b < b1; ++b) {
            const std::size_t r0 = b * kRowBlock, count = std::min(kRowBlock, rows_ - r0);
            for (std::size_t j = 0; j < nt; ++j) k.scale(block.data() + j * rows_ + r0, count, gamma[j] * unit);
            dft_.execute(block.data(), r0, count, fft::Direction::backward);
        }
    });
}

double TimeTransform::from_eigenspace(std::span<cplx> block, std::span<double> out, unsigned workers,
                                      double imag_limit) const
{
    check(block.size());
    check(out.size());
    const auto& k = kernels::active();
    const std::size_t nt = diag_->levels();
    const double unit = 1.0 / std::sqrt(static_cast<double>(nt));
    const auto gamma = diag_->gamma();
    const std::size_t blocks = block_count(rows_);
    std::vector<double> imag_sq(blocks, 0.0), real_sq(blocks, 0.0);
    parallel_for_chunks(blocks, workers, [&](std::size_t b0, std::size_t b1) {
        for (std::size_t b = b0; b < b1; ++b) {
            const std::size_t r0 = b * kRowBlock, count = std::min(kRowBlock, rows_ - r0);
            dft_.execute(block.data(), r0, count, fft::Direction::forward);
            double im = 0.0, re = 0.0;
            for (std::size_t j = 0; j < nt; ++j) {
                double* dst = out.data() + j * rows_ + r0;
                im += k.scale_real_part(block.data() + j * rows_ + r0, dst, count, unit / gamma[j]);
                for (std::size_t r = 0; r < count; ++r) re += dst[r] * dst[r];
            }
            imag_sq[b] = im;
            real_sq[b] = re;
        }
    });
    double im = 0.0, re = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        im += imag_sq[b];
        re += real_sq[b];
    }
    const double ratio = re > 0.0 ? std::sqrt(im / re) : (im > 0.0 ? INFINITY : 0.0);
    if (ratio > imag_limit) throw ImaginaryResidueError(ratio, imag_limit);
    return ratio;
}

void TimeTransform::from_eigenspace(std::span<cplx> block, unsigned workers) const
{
    check(block.size());
    const auto& k = kernels::active();
    const std::size_t nt = diag_->levels();
    const double unit = 1.0 / std::sqrt(static_cast<double>(nt));
    const auto gamma = diag_->gamma();
    parallel_for_chunks(block_count(rows_), workers, [&](std::size_t b0, std::size_t b1) {
        for (std::size_t b = b0; b < b1; ++b) {
            const std::size_t r0 = b * kRowBlock, count = std::min(kRowBlock, rows_ - r0);
            dft_.execute(block.data(), r0, count, fft::Direction::forward);
            for (std::size_t j = 0; j < nt; ++j) k.scale(block.data() + j * rows_ + r0, count, unit / gamma[j]);
        }
    });
}

}  // namespace bhcp
