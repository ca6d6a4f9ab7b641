#include "bhcp/methods.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bhcp {

std::string_view to_string(MethodKind kind) noexcept
{
    switch (kind) {
    case MethodKind::qbvm: return "qbvm";
    case MethodKind::mqbvm: return "mqbvm";
    case MethodKind::pint_qbvm: return "pint-qbvm";
    case MethodKind::pint_mqbvm: return "pint-mqbvm";
    }
    return "?";
}

MethodKind parse_method(std::string_view name)
{
    std::string s(name);
    for (char& c : s) {
        if (c == '_') c = '-';
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (s == "qbvm") return MethodKind::qbvm;
    if (s == "mqbvm") return MethodKind::mqbvm;
    if (s == "pint-qbvm") return MethodKind::pint_qbvm;
    if (s == "pint-mqbvm") return MethodKind::pint_mqbvm;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

bool is_pint(MethodKind kind) noexcept
{
    return kind == MethodKind::pint_qbvm || kind == MethodKind::pint_mqbvm;
}

MethodSpec::MethodSpec(MethodKind kind, double alpha, double tau) : kind_(kind), alpha_(alpha), tau_(tau)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("MethodSpec: alpha must be positive");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("MethodSpec: tau must be positive");
    switch (kind) {
    case MethodKind::pint_qbvm: coupling_ = 1.0 / (tau * alpha); break;
    case MethodKind::pint_mqbvm: coupling_ = 1.0 / alpha; break;
    default: coupling_ = 1.0; break;
    }
    if (!std::isfinite(coupling_)) throw std::invalid_argument("MethodSpec: omega is not finite");
}

std::optional<double> MethodSpec::omega() const noexcept
{
    if (!is_pint(kind_)) return std::nullopt;
    return -tau_ * coupling_;
}

namespace {

double parse_number(std::string_view text, std::string_view what)
{
    std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = std::string::npos;
    }
    if (used != s.size()) throw std::invalid_argument("bad " + std::string(what) + " value '" + s + "'");
    return v;
}

}  // namespace

AlphaRule AlphaRule::parse(std::string_view text)
{
    AlphaRule r;
    if (text == "delta") r.kind = AlphaRuleKind::delta;
    else if (text == "tau-delta") r.kind = AlphaRuleKind::tau_delta;
    else if (text == "delta-over-sqrt-tau") r.kind = AlphaRuleKind::delta_over_sqrt_tau;
    else if (text == "sqrt-tau-delta") r.kind = AlphaRuleKind::sqrt_tau_delta;
    else if (text.starts_with("fixed:")) {
        r.kind = AlphaRuleKind::fixed;
        r.value = parse_number(text.substr(6), "alpha");
        if (!(r.value > 0.0)) throw std::invalid_argument("fixed alpha must be positive");
    } else if (text.starts_with("e0:")) {
        r.kind = AlphaRuleKind::delta_over_e0;
        r.value = parse_number(text.substr(3), "E0");
        if (!(r.value > 0.0)) throw std::invalid_argument("E0 must be positive");
    } else {
        throw std::invalid_argument("unknown alpha rule '" + std::string(text) + "'");
    }
    return r;
}

std::string AlphaRule::to_string() const
{
    std::ostringstream os;
    switch (kind) {
    case AlphaRuleKind::delta: return "delta";
    case AlphaRuleKind::tau_delta: return "tau-delta";
    case AlphaRuleKind::delta_over_sqrt_tau: return "delta-over-sqrt-tau";
    case AlphaRuleKind::sqrt_tau_delta: return "sqrt-tau-delta";
    case AlphaRuleKind::fixed: os << "fixed:" << value; return os.str();
    case AlphaRuleKind::delta_over_e0: os << "e0:" << value; return os.str();
    }
    return "?";
}

double alpha_rule(MethodKind kind, double delta, double tau, const AlphaRule& rule)
{
    if (!(delta >= 0.0)) throw std::invalid_argument("alpha_rule: delta must be non-negative");
    if (!(tau > 0.0)) throw std::invalid_argument("alpha_rule: tau must be positive");
    if (rule.kind == AlphaRuleKind::fixed) return rule.value;
    if (delta == 0.0) return rule.fallback;

    const bool scaled = kind == MethodKind::pint_mqbvm;
    switch (rule.kind) {
    case AlphaRuleKind::delta: return scaled ? tau * delta : delta;
    case AlphaRuleKind::tau_delta: return tau * delta;
    case AlphaRuleKind::delta_over_sqrt_tau: return scaled ? std::sqrt(tau) * delta : delta / std::sqrt(tau);
    case AlphaRuleKind::sqrt_tau_delta: return std::sqrt(tau) * delta;
    case AlphaRuleKind::delta_over_e0: return (scaled ? tau * delta : delta) / rule.value;
    case AlphaRuleKind::fixed: break;
    }
    return rule.value;
}

AllAtOnceSystem::AllAtOnceSystem(const MethodSpec& method, const SpatialGrid& grid, const TimeGrid& time,
                                 std::span<const double> final_data)
    : method_(method),
      grid_(grid),
      time_(time),
      laplacian_(grid),
      final_data_(final_data.begin(), final_data.end()),
      rhs_(grid.size() * time.levels(), 0.0)
{
    if (final_data.size() != grid.size()) throw std::invalid_argument("AllAtOnceSystem: data length must equal N_x");
    if (method.tau() != time.tau()) throw std::invalid_argument("AllAtOnceSystem: method tau differs from time grid");
    const double c = is_pint(method.kind()) ? method.coupling() : 1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) rhs_[i] = c * final_data[i];
}

void AllAtOnceSystem::apply(std::span<const double> y, std::span<double> out) const
{
    const std::size_t nx = grid_.size(), nt = time_.levels();
    if (y.size() != nx * nt || out.size() != nx * nt) throw std::invalid_argument("AllAtOnceSystem::apply: length mismatch");
    const double inv_tau = 1.0 / time_.tau();

    auto level = [&](std::span<const double> v, std::size_t n) { return v.subspan(n * nx, nx); };
    auto level_out = [&](std::size_t n) { return out.subspan(n * nx, nx); };

    for (std::size_t n = 1; n < nt; ++n) {
        auto o = level_out(n);
        laplacian_.apply(level(y, n), o);
        const auto cur = level(y, n), prev = level(y, n - 1);
        for (std::size_t i = 0; i < nx; ++i) o[i] = inv_tau * cur[i] - o[i] - inv_tau * prev[i];
    }

    auto o = level_out(0);
    const auto y0 = level(y, 0), yN = level(y, nt - 1);
    const double alpha = method_.alpha();
    switch (method_.kind()) {
    case MethodKind::qbvm:
        for (std::size_t i = 0; i < nx; ++i) o[i] = alpha * y0[i] + yN[i];
        break;
    case MethodKind::mqbvm: {
        const double a = alpha * inv_tau;
        const auto y1 = level(y, 1);
        for (std::size_t i = 0; i < nx; ++i) o[i] = a * y0[i] - a * y1[i] + yN[i];
        break;
    }
    case MethodKind::pint_qbvm:
    case MethodKind::pint_mqbvm: {
        const double c = method_.coupling();
        laplacian_.apply(y0, o);
        for (std::size_t i = 0; i < nx; ++i) o[i] = inv_tau * y0[i] - o[i] + c * yN[i];
        break;
    }
    }
}

std::vector<double> AllAtOnceSystem::apply(std::span<const double> y) const
{
    std::vector<double> out(size());
    apply(y, out);
    return out;
}

Eigen::SparseMatrix<double> AllAtOnceSystem::sparse() const
{
    const std::size_t nx = grid_.size(), nt = time_.levels();
    const double inv_tau = 1.0 / time_.tau();
    const Eigen::SparseMatrix<double> lap = laplacian_.sparse();
    using Idx = Eigen::Index;

    std::vector<Eigen::Triplet<double>> t;
    t.reserve(nonzeros());
    // Block (n, n): I/tau - Lap_h.
    auto step_block = [&](std::size_t n) {
        const Idx off = static_cast<Idx>(n * nx);
        for (Idx col = 0; col < lap.outerSize(); ++col)
            for (Eigen::SparseMatrix<double>::InnerIterator it(lap, col); it; ++it) {
                const double v = it.row() == it.col() ? inv_tau - it.value() : -it.value();
                t.emplace_back(off + it.row(), off + it.col(), v);
            }
    };
    auto identity_block = [&](std::size_t row_block, std::size_t col_block, double v) {
        for (std::size_t i = 0; i < nx; ++i)
            t.emplace_back(static_cast<Idx>(row_block * nx + i), static_cast<Idx>(col_block * nx + i), v);
    };

    for (std::size_t n = 1; n < nt; ++n) {
        step_block(n);
        identity_block(n, n - 1, -inv_tau);
    }
    const double alpha = method_.alpha();
    switch (method_.kind()) {
    case MethodKind::qbvm:
        identity_block(0, 0, alpha);
        identity_block(0, nt - 1, 1.0);
        break;
    case MethodKind::mqbvm:
        identity_block(0, 0, alpha * inv_tau);
        identity_block(0, 1, -alpha * inv_tau);
        identity_block(0, nt - 1, 1.0);
        break;
    case MethodKind::pint_qbvm:
    case MethodKind::pint_mqbvm:
        step_block(0);
        identity_block(0, nt - 1, method_.coupling());
        break;
    }
    const auto n = static_cast<Idx>(nx * nt);
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(t.begin(), t.end());
    a.makeCompressed();
    return a;
}

std::size_t AllAtOnceSystem::nonzeros() const noexcept
{
    const std::size_t nx = grid_.size(), m = grid_.nodes_per_edge();
    const std::size_t lap = grid_.dim() == 1 ? 3 * m - 2 : 5 * m * m - 4 * m;
    const std::size_t steps = static_cast<std::size_t>(time_.steps());
    std::size_t first = 0;
    switch (method_.kind()) {
    case MethodKind::qbvm: first = 2 * nx; break;
    case MethodKind::mqbvm: first = 3 * nx; break;
    default: first = lap + nx; break;
    }
    return steps * (lap + nx) + first;
}

AllAtOnceSystem assemble(MethodKind kind, double alpha, const SpatialGrid& grid, const TimeGrid& time,
                         std::span<const double> final_data)
{
    return AllAtOnceSystem(MethodSpec(kind, alpha, time.tau()), grid, time, final_data);
}

Residual residual(const AllAtOnceSystem& system, std::span<const double> y)
{
    Residual r;
    r.vector = system.apply(y);
    const auto rhs = system.rhs();
    double rn = 0.0, bn = 0.0;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        r.vector[i] = rhs[i] - r.vector[i];
        rn += r.vector[i] * r.vector[i];
        bn += rhs[i] * rhs[i];
    }
    r.relative = bn > 0.0 ? std::sqrt(rn / bn) : std::sqrt(rn);
    return r;
}

double weighted_norm(std::span<const double> v, const SpatialGrid& grid)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(grid.cell_volume() * s);
}

}  // namespace bhcp
