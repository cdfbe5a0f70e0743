#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "gse/harness.hpp"
#include "gse/sysmodel.hpp"

namespace {

int cmd_list_methods() {
    for (auto m : gse::all_methods())
        std::printf("%-8s %s\n", gse::method_name(m).c_str(),
                    gse::category_name(gse::method_category(m)).c_str());
    return 0;
}

void apply_cli_overrides(gse::RunConfig& cfg, const std::string& out,
                         const std::string& seeds, int cutoff, int jobs) {
    if (!out.empty()) cfg.outDir = out;
    if (!seeds.empty()) {
        cfg.seeds.clear();
        std::stringstream ss(seeds);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) cfg.seeds.push_back(std::stoull(item));
    }
    if (cutoff >= 0) cfg.cutoff = cutoff;
    if (jobs >= 1) cfg.jobs = jobs;
}

int cmd_run(const std::string& path, const std::string& out, const std::string& seeds,
            int cutoff, int jobs) {
    gse::RunConfig cfg;
    try {
        cfg = gse::load_config(path);
        apply_cli_overrides(cfg, out, seeds, cutoff, jobs);
        gse::validate_config(cfg);
    } catch (const gse::config_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    const gse::RunOutcome outcome = gse::run_comparison(cfg);
    for (const auto& f : outcome.files) std::printf("%s\n", f.c_str());
    if (!outcome.anyFinite) {
        std::fprintf(stderr, "every (method, seed) cell diverged\n");
        return 3;
    }
    return 0;
}

int cmd_validate(const std::string& path) {
    try {
        gse::validate_config(gse::load_config(path));
    } catch (const gse::config_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    std::printf("ok\n");
    return 0;
}

int cmd_oracle(const std::string& benchmark, int steps, std::uint64_t seed, double grid,
               const std::string& out) {
    gse::BenchmarkSpec bench;
    try {
        bench = gse::make_benchmark(benchmark);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    if (bench.system.n() > 2) {
        std::fprintf(stderr, "the consistent-set oracle is limited to 2D benchmarks\n");
        return 2;
    }
    const auto traj =
        gse::simulate(bench.system, bench.R0, bench.input_profile, steps, seed);
    auto cloud = gse::initial_consistent_cloud(bench.system, bench.R0, traj.measurements[0], grid);
    std::ofstream f(out.empty() ? "oracle.csv" : out, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "cannot write output file\n");
        return 2;
    }
    f << "k,x1,x2\n";
    const auto dump = [&](int k, const std::vector<Eigen::VectorXd>& pts) {
        for (const auto& p : pts) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", k, p[0], p[1]);
            f << buf;
        }
    };
    dump(0, cloud);
    for (int k = 0; k < steps; ++k) {
        cloud = gse::consistent_set_oracle(bench.system, cloud, traj.inputs[std::size_t(k)],
                                           traj.measurements[std::size_t(k) + 1]);
        if (cloud.empty()) {
            std::fprintf(stderr, "oracle cloud became empty at step %d\n", k + 1);
            return 3;
        }
        dump(k + 1, cloud);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"guaranteed state estimation benchmark harness"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a comparison grid from a config file");
    std::string run_path, run_out, run_seeds;
    int run_cutoff = -1, run_jobs = 0;
    run->add_option("config", run_path, "config file")->required();
    run->add_option("--out", run_out, "output directory override");
    run->add_option("--seeds", run_seeds, "comma-separated seed override");
    run->add_option("--cutoff", run_cutoff, "partial-horizon cutoff override");
    run->add_option("--jobs", run_jobs, "worker threads");

    auto* lm = app.add_subcommand("list-methods", "print the available methods");

    auto* val = app.add_subcommand("validate", "check a config file");
    std::string val_path;
    val->add_option("config", val_path, "config file")->required();

    auto* ora = app.add_subcommand("oracle", "dump the 2D consistent-set cloud");
    std::string ora_bench, ora_out;
    int ora_steps = 10;
    std::uint64_t ora_seed = 1;
    double ora_grid = 0.05;
    ora->add_option("benchmark", ora_bench, "benchmark id, e.g. vdp:0.1")->required();
    ora->add_option("--steps", ora_steps, "number of steps");
    ora->add_option("--seed", ora_seed, "trajectory seed");
    ora->add_option("--grid", ora_grid, "initial grid resolution");
    ora->add_option("--out", ora_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    if (lm->parsed()) return cmd_list_methods();
    if (run->parsed()) return cmd_run(run_path, run_out, run_seeds, run_cutoff, run_jobs);
    if (val->parsed()) return cmd_validate(val_path);
    if (ora->parsed()) return cmd_oracle(ora_bench, ora_steps, ora_seed, ora_grid, ora_out);
    return 0;
}
