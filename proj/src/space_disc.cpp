#include "bhcp/space_disc.hpp"

#include "bhcp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bhcp {

SpatialGrid SpatialGrid::build(int dim, double length, int subdivisions)
{
    if (dim != 1 && dim != 2) throw std::invalid_argument("SpatialGrid: dim must be 1 or 2");
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("SpatialGrid: length must be positive");
    if (subdivisions < 2) throw std::invalid_argument("SpatialGrid: need at least 2 subdivisions");
    return SpatialGrid(dim, length, subdivisions);
}

SpatialGrid::SpatialGrid(int dim, double length, int subdivisions)
    : dim_(dim),
      length_(length),
      subdivisions_(subdivisions),
      h_(length / subdivisions),
      m_(static_cast<std::size_t>(subdivisions - 1)),
      nx_(dim == 1 ? m_ : m_ * m_)
{
}

std::array<double, 2> SpatialGrid::point(std::size_t p) const noexcept
{
    if (dim_ == 1) return {coordinate(p), 0.0};
    return {coordinate(p % m_), coordinate(p / m_)};
}

void DirichletLaplacian::apply(std::span<const double> x, std::span<double> out) const
{
    if (x.size() != grid_.size() || out.size() != grid_.size())
        throw std::invalid_argument("DirichletLaplacian::apply: length mismatch");
    const auto& k = kernels::active();
    const double c = 1.0 / (grid_.h() * grid_.h());
    const std::size_t m = grid_.nodes_per_edge();
    if (grid_.dim() == 1) {
        k.stencil_row(out.data(), x.data(), nullptr, nullptr, m, c, 2.0 * c);
        return;
    }
    for (std::size_t j = 0; j < m; ++j) {
        const double* mid = x.data() + j * m;
        const double* lo = j > 0 ? mid - m : nullptr;
        const double* hi = j + 1 < m ? mid + m : nullptr;
        k.stencil_row(out.data() + j * m, mid, lo, hi, m, c, 4.0 * c);
    }
}

void DirichletLaplacian::apply(std::span<const cplx> x, std::span<cplx> out) const
{
    if (x.size() != grid_.size() || out.size() != grid_.size())
        throw std::invalid_argument("DirichletLaplacian::apply: length mismatch");
    const double c = 1.0 / (grid_.h() * grid_.h());
    const std::size_t m = grid_.nodes_per_edge();
    const std::size_t lines = grid_.dim() == 1 ? 1 : m;
    const double diag = grid_.dim() == 1 ? 2.0 * c : 4.0 * c;
    for (std::size_t j = 0; j < lines; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t p = i + j * m;
            cplx nb = 0.0;
            if (i > 0) nb += x[p - 1];
            if (i + 1 < m) nb += x[p + 1];
            if (j > 0) nb += x[p - m];
            if (j + 1 < lines) nb += x[p + m];
            out[p] = c * nb - diag * x[p];
        }
    }
}

Eigen::SparseMatrix<double> DirichletLaplacian::sparse() const
{
    const std::size_t m = grid_.nodes_per_edge();
    const std::size_t n = grid_.size();
    const std::size_t lines = grid_.dim() == 1 ? 1 : m;
    const double c = 1.0 / (grid_.h() * grid_.h());
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(5 * n);
    for (std::size_t j = 0; j < lines; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            const auto p = static_cast<Eigen::Index>(i + j * m);
            const auto mi = static_cast<Eigen::Index>(m);
            t.emplace_back(p, p, -(grid_.dim() == 1 ? 2.0 : 4.0) * c);
            if (i > 0) t.emplace_back(p, p - 1, c);
            if (i + 1 < m) t.emplace_back(p, p + 1, c);
            if (j > 0) t.emplace_back(p, p - mi, c);
            if (j + 1 < lines) t.emplace_back(p, p + mi, c);
        }
    }
    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

double laplacian_eigenvalue_1d(const SpatialGrid& grid, std::size_t k)
{
    const double s = std::sin(static_cast<double>(k) * std::numbers::pi / (2.0 * grid.subdivisions()));
    return 4.0 / (grid.h() * grid.h()) * s * s;
}

SpatialSpectrum::SpatialSpectrum(const SpatialGrid& grid)
    : grid_(grid),
      transform_(std::make_shared<const fft::SineTransform>(grid.dim(), grid.nodes_per_edge()))
{
    const std::size_t m = grid.nodes_per_edge();
    std::vector<double> line(m);
    for (std::size_t k = 0; k < m; ++k) line[k] = laplacian_eigenvalue_1d(grid, k + 1);
    if (grid.dim() == 1) {
        mu_ = line;
    } else {
        mu_.resize(m * m);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < m; ++i) mu_[i + j * m] = line[i] + line[j];
    }
    const auto [lo, hi] = std::minmax_element(mu_.begin(), mu_.end());
    min_ = *lo;
    max_ = *hi;
}

std::vector<double> SpatialSpectrum::sorted_eigenvalues() const
{
    std::vector<double> s = mu_;
    std::sort(s.begin(), s.end());
    return s;
}

SpatialSpectrum laplacian_eigenvalues(const SpatialGrid& grid) { return SpatialSpectrum(grid); }

void sine_transform(const SpatialSpectrum& spectrum, std::span<double> field, TransformDirection)
{
    spectrum.transform().apply(field);
}

void sine_transform(const SpatialSpectrum& spectrum, std::span<cplx> field, TransformDirection)
{
    spectrum.transform().apply(field);
}

std::vector<double> sine_mode(const SpatialGrid& grid, std::size_t k1, std::size_t k2)
{
    const std::size_t m = grid.nodes_per_edge();
    if (k1 < 1 || k1 > m || (grid.dim() == 2 && (k2 < 1 || k2 > m)))
        throw std::out_of_range("sine_mode: wave number out of range");
    const double M = grid.subdivisions();
    const double norm = std::sqrt(2.0 / M);
    auto line = [&](std::size_t k) {
        std::vector<double> v(m);
        for (std::size_t i = 0; i < m; ++i)
            v[i] = norm * std::sin(static_cast<double>((i + 1) * k) * std::numbers::pi / M);
        return v;
    };
    const auto a = line(k1);
    if (grid.dim() == 1) return a;
    const auto b = line(k2);
    std::vector<double> v(m * m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) v[i + j * m] = a[i] * b[j];
    return v;
}

namespace {

std::string describe(cplx s)
{
    std::ostringstream os;
    os << "singular shift s = (" << s.real() << ", " << s.imag() << ")";
    return os.str();
}

}  // namespace

SingularShiftError::SingularShiftError(cplx shift) : std::runtime_error(describe(shift)), shift_(shift) {}

ShiftedSolver::ShiftedSolver(const SpatialGrid& grid)
    : spectrum_(std::make_shared<const SpatialSpectrum>(grid))
{
}

ShiftedSolver::ShiftedSolver(std::shared_ptr<const SpatialSpectrum> spectrum) : spectrum_(std::move(spectrum))
{
    if (!spectrum_) throw std::invalid_argument("ShiftedSolver: null spectrum");
}

void ShiftedSolver::check_shift(cplx shift) const
{
    const double tol = 1e-14 * std::abs(shift);
    // -mu is real and negative, so the closest eigenvalue to -Re(s) decides.
    const double re = shift.real();
    double closest = spectrum_->min();
    if (-re > spectrum_->min()) {
        const auto mu = spectrum_->eigenvalues();
        closest = *std::min_element(mu.begin(), mu.end(), [re](double a, double b) {
            return std::abs(re + a) < std::abs(re + b);
        });
    }
    if (std::abs(shift + closest) < tol || std::abs(shift + closest) == 0.0)
        throw SingularShiftError(shift);
}

void ShiftedSolver::solve(cplx shift, std::span<cplx> field, ShiftBackend backend) const
{
    if (field.size() != grid().size()) throw std::invalid_argument("ShiftedSolver: length mismatch");
    check_shift(shift);
    if (backend == ShiftBackend::banded) {
        if (grid().dim() == 1)
            solve_tridiagonal(shift, field);
        else
            solve_banded(shift, field);
        return;
    }
    const auto& tr = spectrum_->transform();
    tr.apply(field);
    kernels::active().shifted_divide(field.data(), spectrum_->eigenvalues().data(), field.size(), shift);
    tr.apply(field);
}

void ShiftedSolver::solve(double shift, std::span<double> field) const
{
    if (field.size() != grid().size()) throw std::invalid_argument("ShiftedSolver: length mismatch");
    check_shift(shift);
    const auto& tr = spectrum_->transform();
    tr.apply(field);
    const auto mu = spectrum_->eigenvalues();
    for (std::size_t k = 0; k < field.size(); ++k) field[k] /= shift + mu[k];
    tr.apply(field);
}

// Thomas elimination for tridiag(-c, s + 2c, -c), c = 1/h^2.
void ShiftedSolver::solve_tridiagonal(cplx shift, std::span<cplx> field) const
{
    const std::size_t n = field.size();
    const double c = 1.0 / (grid().h() * grid().h());
    const cplx diag = shift + 2.0 * c;
    std::vector<cplx> upper(n);
    cplx pivot = diag;
    upper[0] = -c / pivot;
    field[0] /= pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag + c * upper[i - 1];
        if (pivot == 0.0) throw SingularShiftError(shift);
        upper[i] = -c / pivot;
        field[i] = (field[i] + c * field[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) field[i] -= upper[i] * field[i + 1];
}

// Banded Gaussian elimination with partial pivoting; lower and upper
// bandwidth m, so pivoting fills at most 2m above the diagonal.
void ShiftedSolver::solve_banded(cplx shift, std::span<cplx> field) const
{
    const std::size_t n = field.size();
    const std::size_t m = grid().nodes_per_edge();
    const std::size_t kl = m, ku = m;
    const std::size_t w = 2 * kl + ku + 1;
    const double c = 1.0 / (grid().h() * grid().h());

    // Row i stores columns [i - kl, i - kl + w).
    std::vector<cplx> band(n * w, cplx{});
    auto at = [&](std::size_t row, std::size_t col) -> cplx& { return band[row * w + (col + kl - row)]; };
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t i = p % m, j = p / m;
        at(p, p) = shift + 4.0 * c;
        if (i > 0) at(p, p - 1) = -c;
        if (i + 1 < m) at(p, p + 1) = -c;
        if (j > 0) at(p, p - m) = -c;
        if (j + 1 < m) at(p, p + m) = -c;
    }

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t last_row = std::min(n - 1, i + kl);
        const std::size_t last_col = std::min(n - 1, i + kl + ku);
        std::size_t piv = i;
        double best = std::abs(at(i, i));
        for (std::size_t r = i + 1; r <= last_row; ++r) {
            const double v = std::abs(at(r, i));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) throw SingularShiftError(shift);
        if (piv != i) {
            for (std::size_t col = i; col <= last_col; ++col) std::swap(at(i, col), at(piv, col));
            std::swap(field[i], field[piv]);
        }
        const cplx d = at(i, i);
        for (std::size_t r = i + 1; r <= last_row; ++r) {
            cplx& lead = at(r, i);
            if (lead == 0.0) continue;
            const cplx f = lead / d;
            lead = 0.0;
            for (std::size_t col = i + 1; col <= last_col; ++col) at(r, col) -= f * at(i, col);
            field[r] -= f * field[i];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        const std::size_t last_col = std::min(n - 1, i + kl + ku);
        cplx acc = field[i];
        for (std::size_t col = i + 1; col <= last_col; ++col) acc -= at(i, col) * field[col];
        field[i] = acc / at(i, i);
    }
}

std::vector<cplx> shifted_solve(const SpatialGrid& grid, cplx shift, std::span<const cplx> rhs,
                                ShiftBackend backend)
{
    ShiftedSolver solver(grid);
    std::vector<cplx> x(rhs.begin(), rhs.end());
    solver.solve(shift, x, backend);
    return x;
}

}  // namespace bhcp
