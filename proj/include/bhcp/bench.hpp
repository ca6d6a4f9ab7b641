#pragma once

// Experiment driver: method x mesh x noise-level sweeps over the two
// benchmark problems, scored against the exact initial data.

#include "bhcp/analysis.hpp"
#include "bhcp/baseline.hpp"
#include "bhcp/methods.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bhcp {

enum class SolverKind { pint, sparse_lu, spectral_oracle };

std::string_view to_string(SolverKind kind) noexcept;
/// "pint", "sparse-lu", "spectral-oracle".
SolverKind parse_solver(std::string_view name);

struct Mesh {
    int M = 0;  // spatial subdivisions per axis
    int N = 0;  // time steps
    bool operator==(const Mesh&) const = default;
};

/// "MxN[,MxN...]".
std::vector<Mesh> parse_meshes(std::string_view text);
/// "a,b,c" of doubles.
std::vector<double> parse_list(std::string_view text);
/// "all" or a single method name.
std::vector<MethodKind> parse_method_list(std::string_view text);

struct ExperimentConfig {
    int example = 1;
    std::vector<MethodKind> methods;
    SolverKind solver = SolverKind::pint;
    std::vector<Mesh> meshes;
    std::vector<double> eps;
    std::uint64_t seed = 0;
    AlphaRule alpha_rule;
    int repeats = 1;
    unsigned workers = 1;
    LuOptions lu;
    /// Throws std::invalid_argument on an empty list, a bad mesh, negative
    /// eps, repeats < 1, or the pint solver paired with a classic method.
    void validate() const;
};

/// One row of the results table. Inapplicable numbers are NaN.
struct SolveReport {
    std::string method;
    int example = 1;
    int dim = 1;
    int M = 0;
    int N = 0;
    double eps = 0.0;
    std::uint64_t seed = 0;  // seed of the noise stream used by this row
    double delta = 0.0;
    double alpha = 0.0;
    double error_l2 = 0.0;
    double residual = 0.0;
    double cpu_total_s = 0.0;
    double cpu_stepA_s = 0.0;
    double cpu_stepB_s = 0.0;
    double cpu_stepC_s = 0.0;
    std::string status = "ok";  // ok | infeasible | failed
};

inline constexpr std::string_view kCsvHeader =
    "method,example,dim,M,N,eps,seed,delta,alpha,error_l2,residual,cpu_total_s,cpu_stepA_s,cpu_stepB_s,"
    "cpu_stepC_s,status";

/// sqrt(h^dim sum (y0_i - z_i)^2). Throws std::invalid_argument on a length
/// mismatch.
double l2_error(std::span<const double> y0, std::span<const double> exact, double h, int dim);

/// Noise seed of one table cell; independent of the method.
std::uint64_t cell_seed(std::uint64_t seed, const Mesh& mesh, double eps, int repeat = 0) noexcept;

/// Reconstructed and exact initial data of one run.
struct RunProfile {
    SolveReport report;
    SpatialGrid grid;
    std::vector<double> numeric;
    std::vector<double> exact;
    int repeat = 0;
};

/// Rows ordered by (mesh, eps, repeat, method). Errors inside a single solve
/// become status "failed" rows with the message on `log`, if given.
std::vector<SolveReport> run_experiment(const ExperimentConfig& config, std::vector<RunProfile>* profiles = nullptr,
                                        std::ostream* log = nullptr);

void write_csv(std::ostream& out, std::span<const SolveReport> reports);
/// Throws std::runtime_error if the file cannot be written.
void emit_csv(std::span<const SolveReport> reports, const std::filesystem::path& path);
/// Throws std::runtime_error on a header mismatch or malformed row.
std::vector<SolveReport> parse_csv(std::istream& in);
std::vector<SolveReport> read_csv(const std::filesystem::path& path);

/// One "x [y] numeric exact" row per node.
void write_profile(std::ostream& out, const RunProfile& run);
void emit_profiles(const RunProfile& run, const std::filesystem::path& path);
std::string profile_filename(const RunProfile& run, SolverKind solver);

/// Bitwise-equal numbers (NaN == NaN) and equal text fields.
bool same_report(const SolveReport& a, const SolveReport& b) noexcept;

}  // namespace bhcp
