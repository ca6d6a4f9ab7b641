#pragma once

// Continuum side of the backward heat problem on (0, pi)^d: eigen-expansions
// of the exact and regularized solutions, the stability / error / rate
// bounds for the PinT regularizations, the two benchmark problems and the
// multiplicative noise model.

#include "bhcp/methods.hpp"
#include "bhcp/space_disc.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bhcp::analysis {

/// g = sum_l b_l phi_l with -Lap phi_l = lambda_l phi_l, given at time T.
struct SpectralCoefficients {
    std::vector<double> eigenvalues;
    std::vector<double> coefficients;
    double final_time = 1.0;

    std::size_t size() const noexcept { return eigenvalues.size(); }
    /// ||g||_2 = sqrt(sum b_l^2).
    double norm() const;
    /// ||z(., 0)||_2 = sqrt(sum e^{2 T lambda_l} b_l^2).
    double initial_norm() const;

    /// lambda_l = l^2 on (0, pi), l = 1..b.size().
    static SpectralCoefficients line(std::vector<double> b, double final_time);
    /// lambda = l1^2 + l2^2 on (0, pi)^2, l1, l2 = 1..per_axis, sorted by
    /// lambda (ties by l1). b is evaluated at each (l1, l2).
    static SpectralCoefficients square(std::size_t per_axis, const std::function<double(int, int)>& b,
                                       double final_time);
};

/// Exact solution z(t) amplitudes e^{(T - t) lambda_l} b_l.
std::vector<double> exact_series(double t, const SpectralCoefficients& c);

/// Noise-free regularized amplitudes e^{-t lambda} b / den with
///   qbvm        alpha + e^{-T lambda}
///   mqbvm       alpha lambda + e^{-T lambda}
///   pint-qbvm   alpha (1 + tau lambda) + e^{-T lambda}
///   pint-mqbvm  alpha (lambda + 1/tau) + e^{-T lambda}
/// tau is ignored by the classic kinds.
std::vector<double> regularized_series(MethodKind kind, double alpha, double tau, double t,
                                       const SpectralCoefficients& c);

/// sqrt(sum (a_l - b_l)^2): the L2 distance of two expansions.
double series_distance(std::span<const double> a, std::span<const double> b);
double series_norm(std::span<const double> a);

/// Ex. 1: triangle z(x, 0) = 2 min(x, pi - x); truncated series
/// (8/pi) sum_{k odd <= 199} cos(k (2x - pi) / 2) k^{-2} e^{-k^2 t}.
double exact_solution_ex1(double x, double t);
inline constexpr int kEx1Terms = 100;

/// Ex. 2: e^{-2t} sin(x1) sin(x2).
double exact_solution_ex2(double x1, double x2, double t);

struct ProblemSpec {
    int id = 1;
    std::string name;
    int dim = 1;
    double length = 0.0;
    double final_time = 1.0;
    double e0 = 0.0;  // ||z(., 0)||_2 of the exact initial data
    std::function<double(double, double, double)> solution;  // z(x1, x2, t); x2 ignored in 1D

    std::vector<double> initial_on(const SpatialGrid& grid) const;
    std::vector<double> final_on(const SpatialGrid& grid) const;
    /// Coefficients of g in the orthonormal basis sqrt(2/pi)^d prod sin(l_i x_i).
    SpectralCoefficients final_coefficients() const;
    SpatialGrid grid(int subdivisions) const { return SpatialGrid::build(dim, length, subdivisions); }
};

ProblemSpec problem(int id);
/// "1", "2", "ex1", "ex2".
ProblemSpec problem_by_name(std::string_view name);

struct NoisyData {
    std::vector<double> values;
    double eps = 0.0;
    std::uint64_t seed = 0;
    double delta = 0.0;  // weighted L2 norm of g_delta - g
};

/// g_delta = g (1 + eps u), u i.i.d. uniform in [-1, 1) per node from a
/// seeded mt19937_64 stream. Throws std::invalid_argument for eps < 0.
NoisyData add_noise(std::span<const double> g, double eps, std::uint64_t seed, const SpatialGrid& grid);

/// Uniform [-1, 1) from the top 53 bits of a 64-bit draw.
double uniform_pm1(std::uint64_t bits) noexcept;

class UnsupportedBound : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// ||y_alpha(t)|| <= (1/alpha)^{1 - t/(T+tau)} ||g|| (pint-qbvm),
/// (tau/alpha)^{1 - t/(T+tau)} ||g|| (pint-mqbvm), tau = 0 for qbvm.
/// Throws UnsupportedBound for mqbvm and std::domain_error for t outside [0, T].
double stability_bound(MethodKind kind, double alpha, double tau, double t, double final_time, double g_norm);

/// ||y_alpha(t) - z(t)|| <= E0 alpha^{t/(T+tau)} (pint-qbvm),
/// E0 (alpha/tau)^{t/(T+tau)} (pint-mqbvm), tau = 0 for qbvm.
double error_bound(MethodKind kind, double alpha, double tau, double t, double final_time, double e0);

/// sqrt(2) E0^{1 - t/(T+tau)} delta^{t/(T+tau)}.
double theorem1_bound(double delta, double e0, double t, double final_time, double tau);

}  // namespace bhcp::analysis
