#pragma once

// Uniform Dirichlet grids on (0, L)^dim, the finite-difference Laplacian on
// interior nodes, its discrete sine eigen-decomposition, and complex-shifted
// solves (s I - Lap_h) x = r.
//
// Field layout: node (i, j) of a 2D grid lives at index i + m * j, with
// i, j in [0, m) and m = M - 1 interior nodes per edge.

#include "bhcp/fft.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace bhcp {

using cplx = std::complex<double>;

class SpatialGrid {
public:
    /// Throws std::invalid_argument unless dim is 1 or 2, L > 0 and M >= 2.
    static SpatialGrid build(int dim, double length, int subdivisions);

    int dim() const noexcept { return dim_; }
    double length() const noexcept { return length_; }
    int subdivisions() const noexcept { return subdivisions_; }
    double h() const noexcept { return h_; }
    std::size_t nodes_per_edge() const noexcept { return m_; }
    std::size_t size() const noexcept { return nx_; }

    /// Coordinate of interior node i along one axis.
    double coordinate(std::size_t i) const noexcept { return static_cast<double>(i + 1) * h_; }
    /// Coordinates of unknown p.
    std::array<double, 2> point(std::size_t p) const noexcept;

    /// h^dim, the quadrature weight of one node.
    double cell_volume() const noexcept { return dim_ == 1 ? h_ : h_ * h_; }

    bool operator==(const SpatialGrid&) const = default;

private:
    SpatialGrid(int dim, double length, int subdivisions);

    int dim_;
    double length_;
    int subdivisions_;
    double h_;
    std::size_t m_;
    std::size_t nx_;
};

/// Lap_h with homogeneous Dirichlet data eliminated: 3-point stencil in 1D,
/// 5-point in 2D. Symmetric negative definite.
class DirichletLaplacian {
public:
    explicit DirichletLaplacian(const SpatialGrid& grid) : grid_(grid) {}

    const SpatialGrid& grid() const noexcept { return grid_; }

    void apply(std::span<const double> x, std::span<double> out) const;
    void apply(std::span<const cplx> x, std::span<cplx> out) const;

    Eigen::SparseMatrix<double> sparse() const;

private:
    SpatialGrid grid_;
};

/// Eigenvalues of -Lap_h in sine-transform coefficient order together with
/// the orthonormal DST-I that diagonalizes it.
class SpatialSpectrum {
public:
    explicit SpatialSpectrum(const SpatialGrid& grid);

    const SpatialGrid& grid() const noexcept { return grid_; }

    /// mu at coefficient index p (same layout as fields). Ascending in 1D;
    /// in 2D entry (k1, k2) holds mu_k1 + mu_k2.
    std::span<const double> eigenvalues() const noexcept { return mu_; }
    std::vector<double> sorted_eigenvalues() const;
    double min() const noexcept { return min_; }
    double max() const noexcept { return max_; }

    const fft::SineTransform& transform() const noexcept { return *transform_; }

private:
    SpatialGrid grid_;
    std::vector<double> mu_;
    double min_;
    double max_;
    std::shared_ptr<const fft::SineTransform> transform_;
};

SpatialSpectrum laplacian_eigenvalues(const SpatialGrid& grid);

/// 1D eigenvalue (4 / h^2) sin^2(k pi / (2M)), k = 1..M-1.
double laplacian_eigenvalue_1d(const SpatialGrid& grid, std::size_t k);

enum class TransformDirection { forward, inverse };

/// Orthonormal sine transform; forward and inverse coincide. Throws
/// std::invalid_argument on a length mismatch.
void sine_transform(const SpatialSpectrum& spectrum, std::span<double> field,
                    TransformDirection direction = TransformDirection::forward);
void sine_transform(const SpatialSpectrum& spectrum, std::span<cplx> field,
                    TransformDirection direction = TransformDirection::forward);

/// Unit-norm discrete sine mode with 1-based wave numbers (k2 ignored in 1D).
std::vector<double> sine_mode(const SpatialGrid& grid, std::size_t k1, std::size_t k2 = 1);

enum class ShiftBackend { spectral, banded };

class SingularShiftError : public std::runtime_error {
public:
    explicit SingularShiftError(cplx shift);
    cplx shift() const noexcept { return shift_; }

private:
    cplx shift_;
};

/// Solves (s I - Lap_h) x = r. Stateless after construction; safe to call
/// concurrently on distinct buffers.
class ShiftedSolver {
public:
    explicit ShiftedSolver(const SpatialGrid& grid);
    explicit ShiftedSolver(std::shared_ptr<const SpatialSpectrum> spectrum);

    const SpatialGrid& grid() const noexcept { return spectrum_->grid(); }
    const SpatialSpectrum& spectrum() const noexcept { return *spectrum_; }

    /// In place: `field` holds r on entry and x on exit.
    void solve(cplx shift, std::span<cplx> field, ShiftBackend backend = ShiftBackend::spectral) const;
    /// Real shift and real data, spectral backend.
    void solve(double shift, std::span<double> field) const;

    /// Throws SingularShiftError if some |s + mu_k| < 1e-14 |s|.
    void check_shift(cplx shift) const;

private:
    void solve_tridiagonal(cplx shift, std::span<cplx> field) const;
    void solve_banded(cplx shift, std::span<cplx> field) const;

    std::shared_ptr<const SpatialSpectrum> spectrum_;
};

std::vector<cplx> shifted_solve(const SpatialGrid& grid, cplx shift, std::span<const cplx> rhs,
                                ShiftBackend backend = ShiftBackend::spectral);

}  // namespace bhcp
