#pragma once

// The four quasi-boundary value regularizations and their all-at-once
// space-time systems. Unknowns are stacked y_h = (y^0, ..., y^N); rows
// n = 1..N are the backward-Euler steps (y^n - y^{n-1}) / tau - Lap_h y^n = 0
// for every method, and row 0 carries the regularized final condition:
//
//   qbvm        alpha y^0 + y^N                           = g
//   mqbvm       -(alpha / tau)(y^1 - y^0) + y^N           = g
//   pint-qbvm   (-Lap_h + I / tau) y^0 + y^N / (tau alpha) = g / (tau alpha)
//   pint-mqbvm  (-Lap_h + I / tau) y^0 + y^N / alpha       = g / alpha
//
// The PinT rows make the operator (1/tau) C_omega (x) I - I (x) Lap_h with
// omega = -tau * coupling (= -1/alpha resp. -tau/alpha).

#include "bhcp/space_disc.hpp"
#include "bhcp/time_circulant.hpp"

#include <Eigen/SparseCore>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bhcp {

enum class MethodKind { qbvm, mqbvm, pint_qbvm, pint_mqbvm };

std::string_view to_string(MethodKind kind) noexcept;
/// Accepts "qbvm", "mqbvm", "pint-qbvm", "pint-mqbvm" (also with '_').
MethodKind parse_method(std::string_view name);
bool is_pint(MethodKind kind) noexcept;

inline constexpr MethodKind kAllMethods[] = {MethodKind::qbvm, MethodKind::pint_qbvm, MethodKind::mqbvm,
                                             MethodKind::pint_mqbvm};

class MethodSpec {
public:
    /// Throws std::invalid_argument unless alpha > 0 (and tau > 0).
    MethodSpec(MethodKind kind, double alpha, double tau);

    MethodKind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }
    double tau() const noexcept { return tau_; }

    /// Coefficient of y^N in the final-condition row (and of g on the rhs for
    /// the PinT kinds): 1 for the classic kinds, 1/(tau alpha) resp. 1/alpha.
    double coupling() const noexcept { return coupling_; }
    /// omega = -tau * coupling for PinT kinds; empty otherwise.
    std::optional<double> omega() const noexcept;

private:
    MethodKind kind_;
    double alpha_;
    double tau_;
    double coupling_;
};

/// Parameter-choice rules. The per-kind rules apply the tau-scaled variant to
/// pint-mqbvm only.
enum class AlphaRuleKind {
    delta,               // delta; tau*delta for pint-mqbvm
    tau_delta,           // tau*delta for every kind
    delta_over_sqrt_tau, // delta/sqrt(tau); sqrt(tau)*delta for pint-mqbvm
    sqrt_tau_delta,      // sqrt(tau)*delta for every kind
    delta_over_e0,       // delta/E0; tau*delta/E0 for pint-mqbvm
    fixed,               // user value
};

struct AlphaRule {
    AlphaRuleKind kind = AlphaRuleKind::delta;
    double value = 0.0;        // fixed alpha, or E0 for delta_over_e0
    double fallback = 1e-12;   // used when delta == 0

    /// "delta", "tau-delta", "delta-over-sqrt-tau", "sqrt-tau-delta",
    /// "fixed:V", "e0:V".
    static AlphaRule parse(std::string_view text);
    std::string to_string() const;
};

/// Throws std::invalid_argument for delta < 0 or tau <= 0.
double alpha_rule(MethodKind kind, double delta, double tau, const AlphaRule& rule = {});

class AllAtOnceSystem {
public:
    /// Throws std::invalid_argument for a non-positive alpha or a data length
    /// other than N_x.
    AllAtOnceSystem(const MethodSpec& method, const SpatialGrid& grid, const TimeGrid& time,
                    std::span<const double> final_data);

    const MethodSpec& method() const noexcept { return method_; }
    const SpatialGrid& grid() const noexcept { return grid_; }
    const TimeGrid& time() const noexcept { return time_; }
    const DirichletLaplacian& laplacian() const noexcept { return laplacian_; }
    std::size_t size() const noexcept { return grid_.size() * time_.levels(); }

    std::span<const double> rhs() const noexcept { return rhs_; }
    std::span<const double> final_data() const noexcept { return final_data_; }

    /// out = A y (matrix-free).
    void apply(std::span<const double> y, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> y) const;

    /// Explicit sparse form, row/column order as in y_h.
    Eigen::SparseMatrix<double> sparse() const;

    /// Number of stored nonzeros of sparse().
    std::size_t nonzeros() const noexcept;

private:
    MethodSpec method_;
    SpatialGrid grid_;
    TimeGrid time_;
    DirichletLaplacian laplacian_;
    std::vector<double> final_data_;
    std::vector<double> rhs_;
};

AllAtOnceSystem assemble(MethodKind kind, double alpha, const SpatialGrid& grid, const TimeGrid& time,
                         std::span<const double> final_data);

struct Residual {
    std::vector<double> vector;
    double relative = 0.0;  // ||r|| / ||rhs|| (absolute if rhs == 0)
};

Residual residual(const AllAtOnceSystem& system, std::span<const double> y);

/// Weighted discrete L2 norm sqrt(h^dim sum v_i^2).
double weighted_norm(std::span<const double> v, const SpatialGrid& grid);

}  // namespace bhcp
