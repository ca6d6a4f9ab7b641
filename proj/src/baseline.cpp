#include "bhcp/baseline.hpp"

#include <Eigen/UmfPackSupport>

#include <cmath>
#include <stdexcept>

namespace bhcp {

double lu_fill_estimate(const SpatialGrid& grid, const TimeGrid& time) noexcept
{
    const double unknowns = static_cast<double>(grid.size()) * static_cast<double>(time.levels());
    const double band = grid.dim() == 1 ? 1.0 : static_cast<double>(grid.nodes_per_edge());
    return unknowns * band;
}

Solution solve_sparse_lu(const AllAtOnceSystem& system, const LuOptions& options)
{
    Solution sol;
    sol.nx = system.grid().size();
    if (lu_fill_estimate(system.grid(), system.time()) > options.budget) {
        sol.status = SolveStatus::infeasible;
        return sol;
    }

    const Eigen::SparseMatrix<double> a = system.sparse();
    const auto rhs = system.rhs();
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));

    Stopwatch clock;
    Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw std::runtime_error("solve_sparse_lu: factorization failed");
    const Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw std::runtime_error("solve_sparse_lu: solve failed");
    sol.timings.total = clock.seconds();

    sol.trajectory.assign(x.data(), x.data() + x.size());
    if (options.compute_residual) sol.residual = residual(system, sol.trajectory).relative;
    return sol;
}

double oracle_denominator(MethodKind kind, double alpha, double tau, int steps, double mu)
{
    const double amp = 1.0 + tau * mu;
    const double decay = std::pow(amp, -steps);
    switch (kind) {
    case MethodKind::qbvm: return alpha + decay;
    case MethodKind::mqbvm: return alpha * mu / amp + decay;
    case MethodKind::pint_qbvm: return alpha * amp + decay;
    case MethodKind::pint_mqbvm: return alpha * (mu + 1.0 / tau) + decay;
    }
    return NAN;
}

Solution solve_spectral_oracle(MethodKind kind, double alpha, const SpatialGrid& grid, const TimeGrid& time,
                               std::span<const double> final_data)
{
    if (!(alpha > 0.0)) throw std::invalid_argument("solve_spectral_oracle: alpha must be positive");
    if (final_data.size() != grid.size()) throw std::invalid_argument("solve_spectral_oracle: data length");
    const SpatialSpectrum spectrum(grid);
    const auto mu = spectrum.eigenvalues();
    const std::size_t nx = grid.size(), nt = time.levels();
    const double tau = time.tau();

    Stopwatch clock;
    std::vector<double> coeff(final_data.begin(), final_data.end());
    spectrum.transform().apply(coeff);
    for (std::size_t k = 0; k < nx; ++k) coeff[k] /= oracle_denominator(kind, alpha, tau, time.steps(), mu[k]);

    Solution sol;
    sol.nx = nx;
    sol.trajectory.resize(nx * nt);
    std::span<double> traj(sol.trajectory);
    for (std::size_t n = 0; n < nt; ++n) {
        auto level = traj.subspan(n * nx, nx);
        std::copy(coeff.begin(), coeff.end(), level.begin());
        spectrum.transform().apply(level);
        if (n + 1 < nt)
            for (std::size_t k = 0; k < nx; ++k) coeff[k] /= 1.0 + tau * mu[k];
    }
    sol.timings.total = clock.seconds();
    return sol;
}

std::vector<double> march_forward(std::span<const double> initial, const TimeGrid& time, const SpatialGrid& grid)
{
    if (initial.size() != grid.size()) throw std::invalid_argument("march_forward: length mismatch");
    const ShiftedSolver solver(grid);
    const double inv_tau = 1.0 / time.tau();
    std::vector<double> y(initial.begin(), initial.end());
    for (int n = 0; n < time.steps(); ++n) {
        for (double& v : y) v *= inv_tau;
        solver.solve(inv_tau, std::span<double>(y));
    }
    return y;
}

}  // namespace bhcp
