#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "deep_eda/dbm.hpp"
#include "deep_eda/harness.hpp"

using namespace deep_eda;

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::string> problem;
    std::optional<int> n;
    std::optional<int> k;
    std::optional<std::string> model;
    std::optional<int> popsize;
    std::optional<std::uint64_t> seed;
    bool dump_config = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "flat key = value config file");
    cmd->add_option("--problem", flags.problem, "onemax|trap|nk|hiff");
    cmd->add_option("--n", flags.n, "genome length");
    cmd->add_option("--k", flags.k, "trap block size / NK neighbor count");
    cmd->add_option("--model", flags.model, "dbm|umda");
    cmd->add_option("--popsize", flags.popsize, "population size");
    cmd->add_option("--seed", flags.seed, "base RNG seed");
    cmd->add_flag("--dump-config", flags.dump_config, "print effective settings and exit");
}

Config effective_config(const CommonFlags& flags) {
    Config cfg = flags.config_path.empty() ? Config{} : Config::from_file(flags.config_path);
    if (flags.problem) cfg.problem = *flags.problem;
    if (flags.n) cfg.n = *flags.n;
    if (flags.k) {
        cfg.trap_k = *flags.k;
        cfg.nk_k = *flags.k;
    }
    if (flags.model) cfg.model = *flags.model;
    if (flags.popsize) cfg.popsize = *flags.popsize;
    if (flags.seed) cfg.seed = *flags.seed;
    return cfg;
}

int cmd_run(const CommonFlags& flags, const std::string& save_params_path) {
    const Config cfg = effective_config(flags);
    if (flags.dump_config) {
        std::cout << cfg.dump();
        return 0;
    }
    const ProblemInstance problem = cfg.make_problem();
    EdaConfig eda_cfg = cfg.make_eda_config();

    std::optional<DbmParams> snapshot;
    if (!save_params_path.empty()) {
        eda_cfg.observer = [&snapshot](const GenerationSnapshot& s) {
            if (s.params) snapshot = *s.params;
        };
    }

    const RunResult res = run_eda(problem, eda_cfg);
    std::cout << "problem=" << cfg.problem << " n=" << problem.n
              << " model=" << cfg.model << " popsize=" << cfg.popsize
              << " seed=" << cfg.seed << '\n'
              << "solved=" << (res.solved ? 1 : 0)
              << " best_fitness=" << res.best_fitness
              << " generations=" << res.generations_used
              << " unique_evals=" << res.unique_evaluations
              << " wall_s=" << res.wall_seconds << '\n';
    if (!res.error.empty()) std::cout << "error=" << res.error << '\n';

    if (!save_params_path.empty()) {
        if (!snapshot) {
            std::cerr << "no model snapshot captured (umda backend or zero generations)\n";
            return 1;
        }
        save_dbm_params(*snapshot, save_params_path);
        std::cout << "params written to " << save_params_path << '\n';
    }
    return res.error.empty() ? 0 : 1;
}

int cmd_sweep(const CommonFlags& flags, const std::string& grid_csv, std::optional<int> runs,
              std::optional<int> jobs, bool no_early_stop,
              const std::string& out_path, const std::string& log_path) {
    Config cfg = effective_config(flags);
    if (!grid_csv.empty()) cfg.set("grid", grid_csv);
    if (runs) cfg.runs = *runs;
    if (jobs) cfg.jobs = *jobs;
    if (no_early_stop) cfg.early_stop = false;
    if (flags.dump_config) {
        std::cout << cfg.dump();
        return 0;
    }

    SweepSpec spec;
    spec.problem = cfg.make_problem();
    spec.grid = cfg.grid;
    spec.runs_per_size = cfg.runs;
    spec.run_config = cfg.make_eda_config();
    spec.base_seed = cfg.seed;
    spec.early_stop = cfg.early_stop;
    spec.jobs = cfg.jobs;

    const SweepSummary summary = run_sweep(spec);
    std::cout << "problem=" << summary.problem << " runs_per_size=" << summary.runs_per_size
              << '\n';
    for (const auto& s : summary.sizes) {
        std::cout << "popsize=" << s.popsize << " successes=" << s.successes << '/' << s.runs
                  << " mean_unique_evals=" << s.mean_unique_evals
                  << " std=" << s.std_unique_evals
                  << " mean_wall_s=" << s.mean_wall_s << '\n';
    }
    std::cout << "min_size_50=" << summary.min_size_50
              << " min_size_90=" << summary.min_size_90 << '\n';

    export_results_csv(summary, out_path);
    export_run_log_csv(summary.run_log, log_path);
    std::cout << "summary csv: " << out_path << "\nrun log csv: " << log_path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DBM-driven estimation-of-distribution optimizer"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    std::string save_params_path;
    CLI::App* run = app.add_subcommand("run", "single optimization run");
    add_common(run, run_flags);
    run->add_option("--save-params", save_params_path,
                    "write the last trained DBM snapshot to this file");

    CommonFlags sweep_flags;
    std::string grid_csv, sweep_out = "sweep_summary.csv", sweep_log = "sweep_runs.csv";
    std::optional<int> sweep_runs, sweep_jobs;
    bool no_early_stop = false;
    CLI::App* sweep = app.add_subcommand("sweep", "population-size sweep");
    add_common(sweep, sweep_flags);
    sweep->add_option("--grid", grid_csv, "comma-separated population sizes");
    sweep->add_option("--runs", sweep_runs, "runs per population size");
    sweep->add_option("--jobs", sweep_jobs, "parallel worker count");
    sweep->add_flag("--no-early-stop", no_early_stop, "always finish the whole grid");
    sweep->add_option("--out", sweep_out, "summary csv path");
    sweep->add_option("--log", sweep_log, "run log csv path");

    std::string heatmap_params, heatmap_out;
    CLI::App* heatmap = app.add_subcommand("heatmap", "export W1 as a PGM image");
    heatmap->add_option("--params", heatmap_params, "dbm parameter snapshot file")->required();
    heatmap->add_option("--out", heatmap_out, "output .pgm path")->required();

    int nk_n = 20, nk_k = 4;
    std::uint64_t nk_seed = 1;
    std::string nk_out;
    CLI::App* gen_nk = app.add_subcommand("gen-nk", "generate an NK instance file");
    gen_nk->add_option("--n", nk_n, "variable count")->required();
    gen_nk->add_option("--k", nk_k, "neighbors per component")->required();
    gen_nk->add_option("--seed", nk_seed, "generator seed");
    gen_nk->add_option("--out", nk_out, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_flags, save_params_path);
        if (sweep->parsed())
            return cmd_sweep(sweep_flags, grid_csv, sweep_runs, sweep_jobs, no_early_stop,
                             sweep_out, sweep_log);
        if (heatmap->parsed()) {
            export_weight_heatmap(load_dbm_params(heatmap_params), heatmap_out);
            std::cout << "heatmap written to " << heatmap_out << '\n';
            return 0;
        }
        if (gen_nk->parsed()) {
            const NkInstance inst = generate_nk_instance(nk_n, nk_k, nk_seed);
            save_nk_instance(inst, nk_out);
            std::cout << "nk instance written to " << nk_out
                      << " (known optimum " << inst.known_optimum << ")\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
