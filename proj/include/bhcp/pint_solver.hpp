#pragma once

// Diagonalization-based direct solver for the block omega-circulant systems
// of pint-qbvm and pint-mqbvm:
//
//   (a) S1 = F (V^{-1})^T                      time FFT, O(N_x N_t log N_t)
//   (b) S2(:, j) = (d_j / tau I - Lap_h)^{-1} S1(:, j),  j = 0..N_t-1
//   (c) y = vec(S2 V^T)                        time FFT, O(N_x N_t log N_t)
//
// Step (b) is N_t independent complex-shifted spatial solves.

#include "bhcp/methods.hpp"
#include "bhcp/solution.hpp"
#include "bhcp/space_disc.hpp"
#include "bhcp/time_circulant.hpp"

#include <span>
#include <stdexcept>

namespace bhcp {

struct PintOptions {
    unsigned workers = 1;
    ShiftBackend backend = ShiftBackend::spectral;
    double imag_limit = 1e-8;
    bool compute_residual = true;
};

class ColumnSolveError : public std::runtime_error {
public:
    ColumnSolveError(std::size_t column, const std::string& what);
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// Throws std::invalid_argument for a classic (non-PinT) method,
/// ColumnSolveError when a Step-(b) shift is singular and
/// ImaginaryResidueError when Step (c) leaves a large imaginary part.
Solution solve_pint(const AllAtOnceSystem& system, const PintOptions& options = {});

/// shift_j = d_j / tau.
std::vector<cplx> step_b_shifts(const CirculantDiagonalization& diag, double tau);

/// Step (b) in place on a column-major N_x x N_t block. Columns are split
/// across workers; each column is solved by the same code path, so the
/// output does not depend on the worker count.
void step_b_parallel(std::span<cplx> block, std::span<const cplx> shifts, const ShiftedSolver& solver,
                     unsigned workers = 1, ShiftBackend backend = ShiftBackend::spectral);

}  // namespace bhcp
