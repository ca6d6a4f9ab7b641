#pragma once

// Reference solvers: a general sparse LU of the full all-at-once system (for
// all four methods) and the closed-form per-sine-mode solution of the same
// discrete systems.

#include "bhcp/methods.hpp"
#include "bhcp/solution.hpp"
#include "bhcp/space_disc.hpp"
#include "bhcp/time_circulant.hpp"

#include <span>
#include <vector>

namespace bhcp {

struct LuOptions {
    /// Refuse systems whose band-fill estimate exceeds this many entries.
    double budget = 3e6;
    bool compute_residual = true;
};

/// N_t N_x (M-1)^{dim-1}: unknowns times the spatial half-bandwidth of the
/// natural ordering, a proxy for the LU factor size.
double lu_fill_estimate(const SpatialGrid& grid, const TimeGrid& time) noexcept;

/// UMFPACK factorization of the explicit sparse system. Over budget, returns
/// status infeasible with an empty trajectory. Throws std::runtime_error if
/// the factorization fails.
Solution solve_sparse_lu(const AllAtOnceSystem& system, const LuOptions& options = {});

/// Per-mode denominator D_k with y^0_k = g_k / D_k, rho = 1 / (1 + tau mu):
///   qbvm        alpha + rho^N
///   mqbvm       alpha mu / (1 + tau mu) + rho^N
///   pint-qbvm   alpha (1 + tau mu) + rho^N
///   pint-mqbvm  alpha (mu + 1/tau) + rho^N
double oracle_denominator(MethodKind kind, double alpha, double tau, int steps, double mu);

/// Exact solution of the assembled discrete system via the sine basis; the
/// whole trajectory, y^n_k = rho^n y^0_k.
Solution solve_spectral_oracle(MethodKind kind, double alpha, const SpatialGrid& grid, const TimeGrid& time,
                               std::span<const double> final_data);

/// N backward-Euler steps from y^0; returns y^N.
std::vector<double> march_forward(std::span<const double> initial, const TimeGrid& time, const SpatialGrid& grid);

}  // namespace bhcp
