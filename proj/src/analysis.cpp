#include "bhcp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <tuple>

namespace bhcp::analysis {

namespace {

// e^{x} b without overflowing the intermediate when the product is finite
double grow(double x, double b)
{
    if (b == 0.0) return 0.0;
    return std::copysign(std::exp(x + std::log(std::abs(b))), b);
}

}  // namespace

double SpectralCoefficients::norm() const { return series_norm(coefficients); }

double SpectralCoefficients::initial_norm() const
{
    double s = 0.0;
    for (std::size_t l = 0; l < size(); ++l) {
        const double a = grow(final_time * eigenvalues[l], coefficients[l]);
        s += a * a;
    }
    return std::sqrt(s);
}

SpectralCoefficients SpectralCoefficients::line(std::vector<double> b, double final_time)
{
    SpectralCoefficients c;
    c.final_time = final_time;
    c.eigenvalues.resize(b.size());
    for (std::size_t l = 0; l < b.size(); ++l) c.eigenvalues[l] = static_cast<double>((l + 1) * (l + 1));
    c.coefficients = std::move(b);
    return c;
}

SpectralCoefficients SpectralCoefficients::square(std::size_t per_axis, const std::function<double(int, int)>& b,
                                                  double final_time)
{
    std::vector<std::tuple<int, int, int>> modes;
    for (int l2 = 1; l2 <= static_cast<int>(per_axis); ++l2)
        for (int l1 = 1; l1 <= static_cast<int>(per_axis); ++l1) modes.emplace_back(l1 * l1 + l2 * l2, l1, l2);
    std::sort(modes.begin(), modes.end());
    SpectralCoefficients c;
    c.final_time = final_time;
    for (const auto& [lam, l1, l2] : modes) {
        c.eigenvalues.push_back(lam);
        c.coefficients.push_back(b(l1, l2));
    }
    return c;
}

std::vector<double> exact_series(double t, const SpectralCoefficients& c)
{
    std::vector<double> a(c.size());
    for (std::size_t l = 0; l < c.size(); ++l)
        a[l] = grow((c.final_time - t) * c.eigenvalues[l], c.coefficients[l]);
    return a;
}

std::vector<double> regularized_series(MethodKind kind, double alpha, double tau, double t,
                                       const SpectralCoefficients& c)
{
    std::vector<double> a(c.size());
    for (std::size_t l = 0; l < c.size(); ++l) {
        const double lam = c.eigenvalues[l];
        const double decay = std::exp(-c.final_time * lam);
        double den = 0.0;
        switch (kind) {
        case MethodKind::qbvm: den = alpha + decay; break;
        case MethodKind::mqbvm: den = alpha * lam + decay; break;
        case MethodKind::pint_qbvm: den = alpha * (1.0 + tau * lam) + decay; break;
        case MethodKind::pint_mqbvm: den = alpha * (lam + 1.0 / tau) + decay; break;
        }
        a[l] = std::exp(-t * lam) * c.coefficients[l] / den;
    }
    return a;
}

double series_distance(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw std::invalid_argument("series_distance: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double series_norm(std::span<const double> a)
{
    return std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
}

double exact_solution_ex1(double x, double t)
{
    double s = 0.0;
    for (int j = 0; j < kEx1Terms; ++j) {
        const double k = 2.0 * j + 1.0;
        s += std::cos(k * (2.0 * x - std::numbers::pi) / 2.0) / (k * k) * std::exp(-k * k * t);
    }
    return 8.0 / std::numbers::pi * s;
}

double exact_solution_ex2(double x1, double x2, double t)
{
    return std::exp(-2.0 * t) * std::sin(x1) * std::sin(x2);
}

std::vector<double> ProblemSpec::initial_on(const SpatialGrid& g) const
{
    std::vector<double> v(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) {
        const auto [x1, x2] = g.point(p);
        v[p] = solution(x1, x2, 0.0);
    }
    return v;
}

std::vector<double> ProblemSpec::final_on(const SpatialGrid& g) const
{
    std::vector<double> v(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) {
        const auto [x1, x2] = g.point(p);
        v[p] = solution(x1, x2, final_time);
    }
    return v;
}

SpectralCoefficients ProblemSpec::final_coefficients() const
{
    if (dim == 1) {
        // cos(k (2x - pi) / 2) = sin(k pi / 2) sin(k x) for odd k
        std::vector<double> b(2 * kEx1Terms - 1, 0.0);
        for (int j = 0; j < kEx1Terms; ++j) {
            const int k = 2 * j + 1;
            const double sign = j % 2 ? -1.0 : 1.0;
            b[k - 1] = sign * 8.0 / std::numbers::pi / (k * k) * std::exp(-k * k * final_time) *
                       std::sqrt(std::numbers::pi / 2.0);
        }
        return SpectralCoefficients::line(std::move(b), final_time);
    }
    const double t = final_time;
    return SpectralCoefficients::square(
        1, [t](int, int) { return std::exp(-2.0 * t) * std::numbers::pi / 2.0; }, t);
}

ProblemSpec problem(int id)
{
    ProblemSpec p;
    p.id = id;
    p.length = std::numbers::pi;
    p.final_time = 1.0;
    if (id == 1) {
        p.name = "ex1";
        p.dim = 1;
        // int_0^pi (2 min(x, pi - x))^2 dx = pi^3 / 3
        p.e0 = std::sqrt(std::pow(std::numbers::pi, 3) / 3.0);
        p.solution = [](double x, double, double t) { return exact_solution_ex1(x, t); };
    } else if (id == 2) {
        p.name = "ex2";
        p.dim = 2;
        p.e0 = std::numbers::pi / 2.0;
        p.solution = [](double x1, double x2, double t) { return exact_solution_ex2(x1, x2, t); };
    } else {
        throw std::invalid_argument("unknown example " + std::to_string(id));
    }
    return p;
}

ProblemSpec problem_by_name(std::string_view name)
{
    if (name == "1" || name == "ex1") return problem(1);
    if (name == "2" || name == "ex2") return problem(2);
    throw std::invalid_argument("unknown example '" + std::string(name) + "'");
}

double uniform_pm1(std::uint64_t bits) noexcept
{
    return 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
}

NoisyData add_noise(std::span<const double> g, double eps, std::uint64_t seed, const SpatialGrid& grid)
{
    if (!(eps >= 0.0)) throw std::invalid_argument("add_noise: eps must be non-negative");
    if (g.size() != grid.size()) throw std::invalid_argument("add_noise: length mismatch");
    NoisyData d;
    d.eps = eps;
    d.seed = seed;
    d.values.resize(g.size());
    std::mt19937_64 rng(seed);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        d.values[i] = g[i] * (1.0 + eps * uniform_pm1(rng()));
        const double diff = d.values[i] - g[i];
        s += diff * diff;
    }
    d.delta = std::sqrt(grid.cell_volume() * s);
    return d;
}

namespace {

double horizon(MethodKind kind, double tau, double t, double final_time)
{
    if (!(t >= 0.0 && t <= final_time)) throw std::domain_error("bound: t must lie in [0, T]");
    switch (kind) {
    case MethodKind::qbvm: return final_time;
    case MethodKind::pint_qbvm:
    case MethodKind::pint_mqbvm: return final_time + tau;
    case MethodKind::mqbvm: break;
    }
    throw UnsupportedBound("no closed-form bound for classic mqbvm");
}

}  // namespace

double stability_bound(MethodKind kind, double alpha, double tau, double t, double final_time, double g_norm)
{
    const double s = t / horizon(kind, tau, t, final_time);
    const double base = kind == MethodKind::pint_mqbvm ? tau / alpha : 1.0 / alpha;
    return std::pow(base, 1.0 - s) * g_norm;
}

double error_bound(MethodKind kind, double alpha, double tau, double t, double final_time, double e0)
{
    const double s = t / horizon(kind, tau, t, final_time);
    const double base = kind == MethodKind::pint_mqbvm ? alpha / tau : alpha;
    return e0 * std::pow(base, s);
}

double theorem1_bound(double delta, double e0, double t, double final_time, double tau)
{
    if (!(delta > 0.0) || !(e0 > 0.0)) throw std::invalid_argument("theorem1_bound: delta and E0 must be positive");
    if (!(t >= 0.0 && t <= final_time)) throw std::domain_error("theorem1_bound: t must lie in [0, T]");
    const double s = t / (final_time + tau);
    return std::sqrt(2.0) * std::pow(e0, 1.0 - s) * std::pow(delta, s);
}

}  // namespace bhcp::analysis
