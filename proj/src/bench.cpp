#include "bhcp/bench.hpp"

#include "bhcp/pint_solver.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bhcp {

std::string_view to_string(SolverKind kind) noexcept
{
    switch (kind) {
    case SolverKind::pint: return "pint";
    case SolverKind::sparse_lu: return "sparse-lu";
    case SolverKind::spectral_oracle: return "spectral-oracle";
    }
    return "?";
}

SolverKind parse_solver(std::string_view name)
{
    if (name == "pint") return SolverKind::pint;
    if (name == "sparse-lu") return SolverKind::sparse_lu;
    if (name == "spectral-oracle") return SolverKind::spectral_oracle;
    throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

int to_int(std::string_view s)
{
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    return v;
}

std::uint64_t to_u64(std::string_view s)
{
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw std::invalid_argument("bad integer '" + std::string(s) + "'");
    return v;
}

double to_double(std::string_view s)
{
    // strtod also reads "nan" and "inf"
    const std::string buf(s);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size()) throw std::invalid_argument("bad number '" + buf + "'");
    return v;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<Mesh> parse_meshes(std::string_view text)
{
    std::vector<Mesh> out;
    for (auto item : split(text, ',')) {
        const auto parts = split(item, 'x');
        if (parts.size() != 2) throw std::invalid_argument("mesh must be MxN, got '" + std::string(item) + "'");
        out.push_back({to_int(parts[0]), to_int(parts[1])});
    }
    return out;
}

std::vector<double> parse_list(std::string_view text)
{
    std::vector<double> out;
    for (auto item : split(text, ',')) out.push_back(to_double(item));
    return out;
}

std::vector<MethodKind> parse_method_list(std::string_view text)
{
    if (text == "all") return {std::begin(kAllMethods), std::end(kAllMethods)};
    std::vector<MethodKind> out;
    for (auto item : split(text, ',')) out.push_back(parse_method(item));
    return out;
}

void ExperimentConfig::validate() const
{
    if (example != 1 && example != 2) throw std::invalid_argument("example must be 1 or 2");
    if (methods.empty()) throw std::invalid_argument("no methods");
    if (meshes.empty()) throw std::invalid_argument("no meshes");
    if (eps.empty()) throw std::invalid_argument("no noise levels");
    for (const Mesh& m : meshes)
        if (m.M < 2 || m.N < 1) throw std::invalid_argument("mesh needs M >= 2 and N >= 1");
    for (double e : eps)
        if (!(e >= 0.0)) throw std::invalid_argument("eps must be non-negative");
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    if (solver == SolverKind::pint)
        for (MethodKind k : methods)
            if (!is_pint(k))
                throw std::invalid_argument("solver pint requires a PinT method, got " + std::string(to_string(k)));
}

double l2_error(std::span<const double> y0, std::span<const double> exact, double h, int dim)
{
    if (y0.size() != exact.size()) throw std::invalid_argument("l2_error: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < y0.size(); ++i) s += (y0[i] - exact[i]) * (y0[i] - exact[i]);
    return std::sqrt(std::pow(h, dim) * s);
}

std::uint64_t cell_seed(std::uint64_t seed, const Mesh& mesh, double eps, int repeat) noexcept
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(mesh.M));
    h = splitmix64(h ^ static_cast<std::uint64_t>(mesh.N));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(eps));
    return splitmix64(h ^ static_cast<std::uint64_t>(repeat));
}

namespace {

Solution run_solver(SolverKind solver, const AllAtOnceSystem& system, const ExperimentConfig& config)
{
    switch (solver) {
    case SolverKind::pint: {
        PintOptions opt;
        opt.workers = config.workers;
        return solve_pint(system, opt);
    }
    case SolverKind::sparse_lu: return solve_sparse_lu(system, config.lu);
    case SolverKind::spectral_oracle: {
        Solution sol = solve_spectral_oracle(system.method().kind(), system.method().alpha(), system.grid(),
                                             system.time(), system.final_data());
        sol.residual = residual(system, sol.trajectory).relative;
        return sol;
    }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

std::vector<SolveReport> run_experiment(const ExperimentConfig& config, std::vector<RunProfile>* profiles,
                                        std::ostream* log)
{
    config.validate();
    const analysis::ProblemSpec problem = analysis::problem(config.example);
    std::vector<SolveReport> reports;

    for (const Mesh& mesh : config.meshes) {
        const SpatialGrid grid = problem.grid(mesh.M);
        const TimeGrid time = TimeGrid::build(problem.final_time, mesh.N);
        const std::vector<double> g = problem.final_on(grid);
        const std::vector<double> z0 = problem.initial_on(grid);

        for (double eps : config.eps) {
            for (int r = 0; r < config.repeats; ++r) {
                const std::uint64_t seed = cell_seed(config.seed, mesh, eps, r);
                const analysis::NoisyData noisy = analysis::add_noise(g, eps, seed, grid);

                for (MethodKind kind : config.methods) {
                    SolveReport rep;
                    rep.method = std::string(to_string(kind));
                    rep.example = config.example;
                    rep.dim = grid.dim();
                    rep.M = mesh.M;
                    rep.N = mesh.N;
                    rep.eps = eps;
                    rep.seed = seed;
                    rep.delta = noisy.delta;
                    rep.error_l2 = rep.residual = NAN;
                    rep.cpu_total_s = rep.cpu_stepA_s = rep.cpu_stepB_s = rep.cpu_stepC_s = NAN;
                    try {
                        rep.alpha = alpha_rule(kind, noisy.delta, time.tau(), config.alpha_rule);
                        const AllAtOnceSystem system = assemble(kind, rep.alpha, grid, time, noisy.values);
                        const Solution sol = run_solver(config.solver, system, config);
                        if (sol.status == SolveStatus::infeasible) {
                            rep.status = "infeasible";
                        } else {
                            rep.error_l2 = l2_error(sol.initial(), z0, grid.h(), grid.dim());
                            rep.residual = sol.residual;
                            rep.cpu_total_s = sol.timings.total;
                            if (config.solver == SolverKind::pint) {
                                rep.cpu_stepA_s = sol.timings.step_a;
                                rep.cpu_stepB_s = sol.timings.step_b;
                                rep.cpu_stepC_s = sol.timings.step_c;
                            }
                            if (profiles)
                                profiles->push_back(RunProfile{rep, grid,
                                                               {sol.initial().begin(), sol.initial().end()}, z0, r});
                        }
                    } catch (const std::exception& e) {
                        rep.status = "failed";
                        if (log)
                            *log << "run " << rep.method << " M=" << mesh.M << " N=" << mesh.N << " eps=" << eps
                                 << " failed: " << e.what() << '\n';
                    }
                    reports.push_back(std::move(rep));
                }
            }
        }
    }
    return reports;
}

void write_csv(std::ostream& out, std::span<const SolveReport> reports)
{
    out << kCsvHeader << '\n';
    for (const SolveReport& r : reports) {
        out << r.method << ',' << r.example << ',' << r.dim << ',' << r.M << ',' << r.N << ',' << fmt(r.eps) << ','
            << r.seed << ',' << fmt(r.delta) << ',' << fmt(r.alpha) << ',' << fmt(r.error_l2) << ','
            << fmt(r.residual) << ',' << fmt(r.cpu_total_s) << ',' << fmt(r.cpu_stepA_s) << ','
            << fmt(r.cpu_stepB_s) << ',' << fmt(r.cpu_stepC_s) << ',' << r.status << '\n';
    }
}

void emit_csv(std::span<const SolveReport> reports, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_csv(out, reports);
    out.flush();
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

std::vector<SolveReport> parse_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("parse_csv: unexpected header");
    std::vector<SolveReport> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 16) throw std::runtime_error("parse_csv: row " + std::to_string(row) + " has wrong arity");
        try {
            SolveReport r;
            r.method = std::string(f[0]);
            r.example = to_int(f[1]);
            r.dim = to_int(f[2]);
            r.M = to_int(f[3]);
            r.N = to_int(f[4]);
            r.eps = to_double(f[5]);
            r.seed = to_u64(f[6]);
            r.delta = to_double(f[7]);
            r.alpha = to_double(f[8]);
            r.error_l2 = to_double(f[9]);
            r.residual = to_double(f[10]);
            r.cpu_total_s = to_double(f[11]);
            r.cpu_stepA_s = to_double(f[12]);
            r.cpu_stepB_s = to_double(f[13]);
            r.cpu_stepC_s = to_double(f[14]);
            r.status = std::string(f[15]);
            out.push_back(std::move(r));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("parse_csv: row " + std::to_string(row) + ": " + e.what());
        }
    }
    return out;
}

std::vector<SolveReport> read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return parse_csv(in);
}

void write_profile(std::ostream& out, const RunProfile& run)
{
    for (std::size_t p = 0; p < run.grid.size(); ++p) {
        const auto [x1, x2] = run.grid.point(p);
        out << fmt(x1) << ' ';
        if (run.grid.dim() == 2) out << fmt(x2) << ' ';
        out << fmt(run.numeric[p]) << ' ' << fmt(run.exact[p]) << '\n';
    }
}

void emit_profiles(const RunProfile& run, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_profile(out, run);
    out.flush();
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

std::string profile_filename(const RunProfile& run, SolverKind solver)
{
    char eps[32];
    std::snprintf(eps, sizeof eps, "%g", run.report.eps);
    std::ostringstream s;
    s << "ex" << run.report.example << '_' << run.report.method << '_' << to_string(solver) << "_M" << run.report.M
      << "_N" << run.report.N << "_eps" << eps << "_r" << run.repeat << ".txt";
    return s.str();
}

bool same_report(const SolveReport& a, const SolveReport& b) noexcept
{
    const auto eq = [](double x, double y) { return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y); };
    return a.method == b.method && a.example == b.example && a.dim == b.dim && a.M == b.M && a.N == b.N &&
           eq(a.eps, b.eps) && a.seed == b.seed && eq(a.delta, b.delta) && eq(a.alpha, b.alpha) &&
           eq(a.error_l2, b.error_l2) && eq(a.residual, b.residual) && eq(a.cpu_total_s, b.cpu_total_s) &&
           eq(a.cpu_stepA_s, b.cpu_stepA_s) && eq(a.cpu_stepB_s, b.cpu_stepB_s) && eq(a.cpu_stepC_s, b.cpu_stepC_s) &&
           a.status == b.status;
}

}  // namespace bhcp
