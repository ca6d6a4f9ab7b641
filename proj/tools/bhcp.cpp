// bhcp run: noise sweeps of the backward heat benchmarks, one CSV row per solve.

#include "bhcp/bench.hpp"
#include "bhcp/kernels.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <tuple>

namespace {

double median(std::vector<double> v)
{
    if (v.empty()) return NAN;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void print_summary(const std::vector<bhcp::SolveReport>& reports)
{
    using Key = std::tuple<int, int, double, std::string>;
    std::map<Key, std::vector<const bhcp::SolveReport*>> cells;
    for (const auto& r : reports) cells[{r.M, r.N, -r.eps, r.method}].push_back(&r);

    std::printf("%-11s %6s %6s %9s %12s %12s %10s  %s\n", "method", "M", "N", "eps", "alpha", "e_h", "cpu_s",
                "status");
    for (const auto& [key, rows] : cells) {
        std::vector<double> err, cpu, alpha;
        std::size_t ok = 0;
        for (const auto* r : rows) {
            if (r->status == "ok") {
                ++ok;
                err.push_back(r->error_l2);
                cpu.push_back(r->cpu_total_s);
                alpha.push_back(r->alpha);
            }
        }
        const auto* first = rows.front();
        if (ok == 0) {
            std::printf("%-11s %6d %6d %9.1e %12s %12s %10s  %s\n", first->method.c_str(), first->M, first->N,
                        first->eps, "--", "--", "--", first->status.c_str());
            continue;
        }
        std::printf("%-11s %6d %6d %9.1e %12.4e %12.5f %10.4f  ok %zu/%zu\n", first->method.c_str(), first->M,
                    first->N, first->eps, median(alpha), median(err), median(cpu), ok, rows.size());
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Backward heat conduction benchmarks"};
    app.require_subcommand(1);
    CLI::App* run = app.add_subcommand("run", "run an experiment sweep and write a CSV table");

    std::string example = "1", methods, solver = "pint", meshes, eps, alpha_rule = "delta", out;
    std::string profiles_dir;
    std::uint64_t seed = 0;
    int repeats = 1;
    unsigned workers = 1;
    double budget = bhcp::LuOptions{}.budget;

    run->add_option("--example", example, "1 or 2")->check(CLI::IsMember({"1", "2", "ex1", "ex2"}));
    run->add_option("--method", methods, "qbvm|mqbvm|pint-qbvm|pint-mqbvm|all")->required();
    run->add_option("--solver", solver, "pint|sparse-lu|spectral-oracle")
        ->check(CLI::IsMember({"pint", "sparse-lu", "spectral-oracle"}));
    run->add_option("--mesh", meshes, "MxN[,MxN...]")->required();
    run->add_option("--eps", eps, "comma-separated noise levels")->required();
    run->add_option("--alpha-rule", alpha_rule,
                    "delta|tau-delta|delta-over-sqrt-tau|sqrt-tau-delta|fixed:VALUE|e0:VALUE");
    run->add_option("--seed", seed, "base seed");
    run->add_option("--out", out, "CSV output path")->required();
    run->add_option("--profiles", profiles_dir, "directory for reconstructed profiles");
    run->add_option("--repeats", repeats, "noise realizations per cell")->check(CLI::PositiveNumber);
    run->add_option("--workers", workers, "threads for the column solves")->check(CLI::PositiveNumber);
    run->add_option("--lu-budget", budget, "sparse-lu size cap (band-fill estimate)");

    CLI11_PARSE(app, argc, argv);

    bhcp::ExperimentConfig config;
    try {
        config.example = bhcp::analysis::problem_by_name(example).id;
        config.methods = bhcp::parse_method_list(methods);
        config.solver = bhcp::parse_solver(solver);
        config.meshes = bhcp::parse_meshes(meshes);
        config.eps = bhcp::parse_list(eps);
        config.alpha_rule = bhcp::AlphaRule::parse(alpha_rule);
        config.seed = seed;
        config.repeats = repeats;
        config.workers = workers;
        config.lu.budget = budget;
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "bhcp: " << e.what() << '\n';
        return 2;
    }

    std::cout << "# bhcp run --example " << config.example << " --method " << methods << " --solver " << solver
              << " --mesh " << meshes << " --eps " << eps << " --alpha-rule " << config.alpha_rule.to_string()
              << " --seed " << seed << " --repeats " << repeats << " --workers " << workers << " --out " << out;
    if (!profiles_dir.empty()) std::cout << " --profiles " << profiles_dir;
    std::cout << "\n# kernels " << bhcp::kernels::active().name << ", lu budget " << budget << "\n";

    std::vector<bhcp::RunProfile> profiles;
    const auto reports =
        bhcp::run_experiment(config, profiles_dir.empty() ? nullptr : &profiles, &std::cerr);

    try {
        bhcp::emit_csv(reports, out);
        if (!profiles_dir.empty()) {
            std::filesystem::create_directories(profiles_dir);
            for (const auto& p : profiles)
                bhcp::emit_profiles(p, std::filesystem::path(profiles_dir) / bhcp::profile_filename(p, config.solver));
        }
    } catch (const std::exception& e) {
        std::cerr << "bhcp: " << e.what() << '\n';
        return 3;
    }

    print_summary(reports);
    const bool failed =
        std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.status == "failed"; });
    return failed ? 1 : 0;
}
