#include "bhcp/pint_solver.hpp"

#include "bhcp/parallel.hpp"

#include <memory>
#include <sstream>

namespace bhcp {

ColumnSolveError::ColumnSolveError(std::size_t column, const std::string& what)
    : std::runtime_error("step (b) column " + std::to_string(column) + ": " + what), column_(column)
{
}

std::vector<cplx> step_b_shifts(const CirculantDiagonalization& diag, double tau)
{
    const auto d = diag.eigenvalues();
    std::vector<cplx> s(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) s[j] = d[j] / tau;
    return s;
}

void step_b_parallel(std::span<cplx> block, std::span<const cplx> shifts, const ShiftedSolver& solver,
                     unsigned workers, ShiftBackend backend)
{
    const std::size_t nx = solver.grid().size();
    if (block.size() != nx * shifts.size()) throw std::invalid_argument("step_b_parallel: shape mismatch");
    parallel_for_chunks(shifts.size(), workers, [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j) {
            try {
                solver.solve(shifts[j], block.subspan(j * nx, nx), backend);
            } catch (const SingularShiftError& e) {
                throw ColumnSolveError(j, e.what());
            }
        }
    });
}

Solution solve_pint(const AllAtOnceSystem& system, const PintOptions& options)
{
    const auto omega = system.method().omega();
    if (!omega) {
        throw std::invalid_argument("solve_pint: " + std::string(to_string(system.method().kind())) +
                                    " is not block omega-circulant; use a baseline solver");
    }
    const std::size_t nx = system.grid().size();
    const std::size_t nt = system.time().levels();
    const double tau = system.time().tau();

    Stopwatch total;
    auto diag = std::make_shared<const CirculantDiagonalization>(nt, *omega);
    const TimeTransform transform(diag, nx);
    const ShiftedSolver solver(system.grid());
    const auto shifts = step_b_shifts(*diag, tau);

    Solution sol;
    sol.nx = nx;
    sol.trajectory.resize(nx * nt);
    std::vector<cplx> block(nx * nt);

    Stopwatch step;
    transform.to_eigenspace(system.rhs(), block, options.workers);
    sol.timings.step_a = step.seconds();

    step.restart();
    step_b_parallel(block, shifts, solver, options.workers, options.backend);
    sol.timings.step_b = step.seconds();

    step.restart();
    sol.imag_residue = transform.from_eigenspace(block, sol.trajectory, options.workers, options.imag_limit);
    sol.timings.step_c = step.seconds();
    sol.timings.total = total.seconds();

    if (options.compute_residual) sol.residual = residual(system, sol.trajectory).relative;
    return sol;
}

}  // namespace bhcp
