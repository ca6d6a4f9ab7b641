#pragma once

// Thin RAII layer over FFTW for the two transforms the solvers need: the
// orthonormal type-I sine transform on interior Dirichlet nodes, and batched
// complex DFTs along the strided time axis of an N_x x N_t column-major block.
//
// Plans are created under a global lock (the FFTW planner is not reentrant)
// and executed through the new-array interface, so a const plan object can be
// used from several threads on distinct buffers.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>

struct fftw_plan_s;

namespace bhcp::fft {

using cplx = std::complex<double>;

class Plan {
public:
    Plan() = default;
    explicit Plan(fftw_plan_s* p) noexcept : plan_(p) {}
    Plan(Plan&& other) noexcept : plan_(other.plan_) { other.plan_ = nullptr; }
    Plan& operator=(Plan&& other) noexcept;
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan();

    fftw_plan_s* get() const noexcept { return plan_; }

private:
    fftw_plan_s* plan_ = nullptr;
};

/// Orthonormal DST-I on an m-point line (dim 1) or m x m square (dim 2).
/// Self-inverse.
class SineTransform {
public:
    SineTransform(int dim, std::size_t m);

    void apply(std::span<double> field) const;
    void apply(std::span<cplx> field) const;  // real and imaginary parts independently

    std::size_t size() const noexcept { return size_; }
    int dim() const noexcept { return dim_; }

private:
    int dim_;
    std::size_t m_;
    std::size_t size_;
    double scale_;
    std::shared_ptr<const Plan> real_plan_;
    std::shared_ptr<const Plan> complex_plan_;
};

enum class Direction { forward, backward };  // e^{-i...} / e^{+i...}, both unnormalized

/// Unnormalized length-nt DFTs along the time axis of a column-major
/// rows x nt block (element (r, j) at r + rows * j), for any contiguous range
/// of rows.
class TimeDft {
public:
    TimeDft(std::size_t rows, std::size_t nt);

    void execute(cplx* block, std::size_t row_begin, std::size_t row_count, Direction dir) const;

    std::size_t rows() const noexcept { return rows_; }
    std::size_t nt() const noexcept { return nt_; }

private:
    const Plan& plan_for(cplx* sample, std::size_t row_count, Direction dir) const;

    std::size_t rows_;
    std::size_t nt_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<std::size_t, int>, Plan> plans_;
};

}  // namespace bhcp::fft
