#include "bhcp/bench.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

using namespace bhcp;
using std::numbers::pi;

namespace {

ExperimentConfig small_config()
{
    ExperimentConfig c;
    c.example = 1;
    c.methods = {MethodKind::pint_qbvm, MethodKind::pint_mqbvm};
    c.solver = SolverKind::pint;
    c.meshes = {{32, 32}, {64, 16}};
    c.eps = {1e-1, 1e-3};
    c.seed = 5;
    return c;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST(L2Error, Basics)
{
    const std::vector<double> a{1.0, 2.0, 3.0};
    EXPECT_EQ(l2_error(a, a, 0.1, 1), 0.0);
    const auto g = SpatialGrid::build(1, pi, 100);
    const std::vector<double> z(g.size(), 0.0), c(g.size(), 0.5);
    EXPECT_NEAR(l2_error(c, z, g.h(), 1), 0.5 * std::sqrt(g.h() * (100 - 1)), 1e-14);
    EXPECT_NEAR(l2_error(c, z, g.h(), 1), 0.5 * std::sqrt(pi), 0.01);
    EXPECT_NEAR(l2_error({{2.0}}, {{0.0}}, 0.5, 2), 1.0, 1e-15);
    EXPECT_THROW(l2_error(a, {{1.0}}, 0.1, 1), std::invalid_argument);
}

TEST(Parsing, MeshesListsMethods)
{
    EXPECT_EQ(parse_meshes("1024x1024"), (std::vector<Mesh>{{1024, 1024}}));
    EXPECT_EQ(parse_meshes("16x8,32x4"), (std::vector<Mesh>{{16, 8}, {32, 4}}));
    EXPECT_THROW(parse_meshes("16x"), std::invalid_argument);
    EXPECT_THROW(parse_meshes("16"), std::invalid_argument);
    EXPECT_EQ(parse_list("1e-1,1e-3"), (std::vector<double>{1e-1, 1e-3}));
    EXPECT_THROW(parse_list("0.1,abc"), std::invalid_argument);
    EXPECT_EQ(parse_method_list("all").size(), 4u);
    EXPECT_EQ(parse_method_list("pint-qbvm"), std::vector<MethodKind>{MethodKind::pint_qbvm});
    EXPECT_EQ(parse_solver("sparse-lu"), SolverKind::sparse_lu);
    EXPECT_EQ(to_string(SolverKind::spectral_oracle), "spectral-oracle");
    EXPECT_THROW(parse_solver("lu"), std::invalid_argument);
}

TEST(Config, Validation)
{
    auto c = small_config();
    EXPECT_NO_THROW(c.validate());
    c.methods.push_back(MethodKind::qbvm);
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.solver = SolverKind::sparse_lu;
    EXPECT_NO_THROW(c.validate());
    c.solver = SolverKind::spectral_oracle;
    EXPECT_NO_THROW(c.validate());
    auto d = small_config();
    d.eps = {-1.0};
    EXPECT_THROW(d.validate(), std::invalid_argument);
    d = small_config();
    d.meshes = {{1, 4}};
    EXPECT_THROW(d.validate(), std::invalid_argument);
    d = small_config();
    d.repeats = 0;
    EXPECT_THROW(d.validate(), std::invalid_argument);
    d = small_config();
    d.example = 3;
    EXPECT_THROW(d.validate(), std::invalid_argument);
    c.solver = SolverKind::pint;
    EXPECT_THROW(run_experiment(c), std::invalid_argument);
}

TEST(CellSeed, DependsOnCellOnly)
{
    const Mesh m{64, 64};
    EXPECT_EQ(cell_seed(1, m, 0.1), cell_seed(1, m, 0.1, 0));
    EXPECT_NE(cell_seed(1, m, 0.1), cell_seed(2, m, 0.1));
    EXPECT_NE(cell_seed(1, m, 0.1), cell_seed(1, {64, 32}, 0.1));
    EXPECT_NE(cell_seed(1, m, 0.1), cell_seed(1, m, 0.01));
    EXPECT_NE(cell_seed(1, m, 0.1, 0), cell_seed(1, m, 0.1, 1));
}

TEST(Csv, HeaderOnlyForEmpty)
{
    std::ostringstream s;
    write_csv(s, {});
    EXPECT_EQ(s.str(), std::string(kCsvHeader) + "\n");
    EXPECT_EQ(std::string(kCsvHeader),
              "method,example,dim,M,N,eps,seed,delta,alpha,error_l2,residual,cpu_total_s,cpu_stepA_s,cpu_stepB_s,"
              "cpu_stepC_s,status");
}

TEST(Csv, RoundTripIsLossless)
{
    SolveReport a;
    a.method = "pint-mqbvm";
    a.example = 2;
    a.dim = 2;
    a.M = 128;
    a.N = 64;
    a.eps = 0.1;
    a.seed = std::numeric_limits<std::uint64_t>::max();
    a.delta = 1.0 / 3.0;
    a.alpha = 5e-324;
    a.error_l2 = 0.17;
    a.residual = NAN;
    a.cpu_total_s = 1e300;
    a.cpu_stepA_s = -0.0;
    a.cpu_stepB_s = std::nextafter(1.0, 2.0);
    a.cpu_stepC_s = 2.5;
    a.status = "infeasible";
    SolveReport b;
    const std::vector<SolveReport> rows{a, b};
    std::stringstream s;
    write_csv(s, rows);
    const auto back = parse_csv(s);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_TRUE(same_report(back[0], a));
    EXPECT_TRUE(same_report(back[1], b));
}

TEST(Csv, RejectsMalformedInput)
{
    std::istringstream bad_header("method,example\n");
    EXPECT_THROW(parse_csv(bad_header), std::runtime_error);
    std::istringstream bad_row(std::string(kCsvHeader) + "\npint-qbvm,1,1\n");
    EXPECT_THROW(parse_csv(bad_row), std::runtime_error);
    EXPECT_THROW(emit_csv({}, "/nonexistent-dir/x.csv"), std::runtime_error);
}

TEST(Csv, FileRoundTrip)
{
    const auto path = std::filesystem::temp_directory_path() / "bhcp_test_roundtrip.csv";
    const auto reports = run_experiment(small_config());
    emit_csv(reports, path);
    const auto back = read_csv(path);
    ASSERT_EQ(back.size(), reports.size());
    for (std::size_t i = 0; i < back.size(); ++i) EXPECT_TRUE(same_report(back[i], reports[i]));
    std::filesystem::remove(path);
}

TEST(RunExperiment, RowsAndDeterminism)
{
    const auto c = small_config();
    auto a = run_experiment(c), b = run_experiment(c);
    ASSERT_EQ(a.size(), 2u * 2u * 2u);
    for (auto* rows : {&a, &b})
        for (auto& r : *rows) r.cpu_total_s = r.cpu_stepA_s = r.cpu_stepB_s = r.cpu_stepC_s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_TRUE(same_report(a[i], b[i]));
        EXPECT_EQ(a[i].status, "ok");
        EXPECT_GE(a[i].error_l2, 0.0);
        EXPECT_LE(a[i].residual, 1e-6);
    }
    // one noise realization per cell, shared across methods
    EXPECT_EQ(a[0].seed, a[1].seed);
    EXPECT_EQ(a[0].delta, a[1].delta);
    EXPECT_NE(a[0].seed, a[2].seed);
    // delta rule: alpha = delta for pint-qbvm, tau * delta for pint-mqbvm
    EXPECT_EQ(a[0].alpha, a[0].delta);
    EXPECT_DOUBLE_EQ(a[1].alpha, a[1].delta / 32);
    // identical systems for the two PinT kinds under these rules
    EXPECT_NEAR(a[0].error_l2, a[1].error_l2, 1e-12);
}

TEST(RunExperiment, WorkerCountDoesNotChangeOutput)
{
    auto c = small_config();
    auto a = run_experiment(c);
    c.workers = 3;
    auto b = run_experiment(c);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].error_l2, b[i].error_l2);
        EXPECT_EQ(a[i].residual, b[i].residual);
    }
}

TEST(RunExperiment, RepeatsUseDistinctNoise)
{
    auto c = small_config();
    c.meshes = {{32, 32}};
    c.eps = {0.1};
    c.methods = {MethodKind::pint_qbvm};
    c.repeats = 3;
    const auto r = run_experiment(c);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_NE(r[0].seed, r[1].seed);
    EXPECT_NE(r[1].delta, r[2].delta);
    c.repeats = 1;
    EXPECT_EQ(run_experiment(c)[0].seed, r[0].seed);
}

TEST(RunExperiment, BaselineCapGivesInfeasibleRows)
{
    ExperimentConfig c;
    c.example = 2;
    c.methods = {MethodKind::qbvm, MethodKind::mqbvm};
    c.solver = SolverKind::sparse_lu;
    c.meshes = {{8, 8}, {128, 128}};
    c.eps = {0.1};
    const auto r = run_experiment(c);
    ASSERT_EQ(r.size(), 4u);
    EXPECT_EQ(r[0].status, "ok");
    EXPECT_EQ(r[1].status, "ok");
    EXPECT_EQ(r[2].status, "infeasible");
    EXPECT_EQ(r[3].status, "infeasible");
    EXPECT_TRUE(std::isnan(r[2].error_l2));
}

TEST(RunExperiment, AllSolversAgreeOnPintKinds)
{
    auto c = small_config();
    c.meshes = {{16, 16}};
    const auto p = run_experiment(c);
    c.solver = SolverKind::sparse_lu;
    const auto l = run_experiment(c);
    c.solver = SolverKind::spectral_oracle;
    const auto o = run_experiment(c);
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_NEAR(p[i].error_l2, l[i].error_l2, 1e-9 * l[i].error_l2);
        EXPECT_NEAR(p[i].error_l2, o[i].error_l2, 1e-9 * o[i].error_l2);
    }
}

TEST(RunExperiment, Ex2DiscretizationErrorDecreases)
{
    ExperimentConfig c;
    c.example = 2;
    c.methods = {MethodKind::qbvm};
    c.solver = SolverKind::spectral_oracle;
    c.meshes = {{16, 16}, {32, 32}, {64, 64}};
    c.eps = {0.0};
    c.alpha_rule = AlphaRule::parse("fixed:1e-14");
    const auto r = run_experiment(c);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_GT(r[0].error_l2, r[1].error_l2);
    EXPECT_GT(r[1].error_l2, r[2].error_l2);
    EXPECT_GT(r[2].error_l2, 0.0);
    // first-order in time: halving tau roughly halves the error
    EXPECT_NEAR(r[1].error_l2 / r[2].error_l2, 2.0, 0.3);
}

TEST(RunExperiment, MedianErrorFallsWithNoiseOnEx2)
{
    ExperimentConfig c;
    c.example = 2;
    c.methods = {MethodKind::pint_qbvm, MethodKind::pint_mqbvm};
    c.solver = SolverKind::pint;
    c.meshes = {{64, 64}};
    c.eps = {1e-1, 1e-2, 1e-3};
    c.repeats = 5;
    c.seed = 2024;
    const auto r = run_experiment(c);
    for (MethodKind k : c.methods) {
        std::vector<double> med;
        for (double e : c.eps) {
            std::vector<double> err;
            for (const auto& row : r)
                if (row.method == to_string(k) && row.eps == e) err.push_back(row.error_l2);
            ASSERT_EQ(err.size(), 5u);
            med.push_back(median(err));
        }
        EXPECT_GE(med[0], med[1]) << to_string(k);
        EXPECT_GE(med[1], med[2]) << to_string(k);
    }
}

namespace {

double peak_of(const RunProfile& p)
{
    for (std::size_t i = 0; i < p.grid.size(); ++i)
        if (std::abs(p.grid.coordinate(i) - pi / 2) < 1e-12) return p.numeric[i];
    return NAN;
}

// Continuum regularized initial value at x = pi/2 for the same alpha and tau.
double series_peak(double alpha, double tau)
{
    const auto c = analysis::problem(1).final_coefficients();
    const auto a = analysis::regularized_series(MethodKind::pint_qbvm, alpha, tau, 0.0, c);
    double s = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l) s += a[l] * std::sqrt(2.0 / pi) * std::sin((l + 1) * pi / 2);
    return s;
}

}  // namespace

TEST(Profiles, Format)
{
    ExperimentConfig c;
    c.example = 1;
    c.methods = {MethodKind::pint_qbvm};
    c.meshes = {{256, 256}};
    c.eps = {1e-6};
    std::vector<RunProfile> profiles;
    run_experiment(c, &profiles);
    ASSERT_EQ(profiles.size(), 1u);
    const RunProfile& p = profiles[0];
    std::ostringstream out;
    write_profile(out, p);
    std::istringstream in(out.str());
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        double x, y, z;
        ls >> x >> y >> z;
        ASSERT_FALSE(ls.fail());
        std::string extra;
        EXPECT_FALSE(ls >> extra);
        EXPECT_EQ(x, p.grid.coordinate(rows));
        EXPECT_EQ(y, p.numeric[rows]);
        EXPECT_EQ(z, p.exact[rows]);
        ++rows;
    }
    EXPECT_EQ(rows, p.grid.size());
    EXPECT_EQ(profile_filename(p, SolverKind::pint), "ex1_pint-qbvm_pint_M256_N256_eps1e-06_r0.txt");

    c.example = 2;
    c.meshes = {{8, 8}};
    profiles.clear();
    run_experiment(c, &profiles);
    std::ostringstream out2;
    write_profile(out2, profiles[0]);
    std::istringstream first(out2.str().substr(0, out2.str().find('\n')));
    int cols = 0;
    for (std::string tok; first >> tok;) ++cols;
    EXPECT_EQ(cols, 4);
}

TEST(Profiles, PeakApproachesTriangleTop)
{
    // noise-free data, small alpha: under refinement the discrete peak tends
    // to the regularized continuum value, itself close to pi
    const double alpha = 1e-8;
    ExperimentConfig c;
    c.example = 1;
    c.methods = {MethodKind::pint_qbvm};
    c.meshes = {{64, 64}, {256, 256}, {1024, 1024}};
    c.eps = {0.0};
    c.alpha_rule = AlphaRule::parse("fixed:1e-8");
    std::vector<RunProfile> profiles;
    run_experiment(c, &profiles);
    ASSERT_EQ(profiles.size(), 3u);
    EXPECT_NEAR(profiles[0].exact[31], analysis::exact_solution_ex1(pi / 2, 0.0), 1e-14);
    double prev_gap = INFINITY;
    for (const auto& p : profiles) {
        const double target = series_peak(alpha, 1.0 / p.report.N);
        EXPECT_NEAR(target, pi, 0.1 * pi);
        const double gap = std::abs(peak_of(p) - target);
        EXPECT_LT(gap, prev_gap) << p.report.M;
        prev_gap = gap;
    }
}
