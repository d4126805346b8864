#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deep_eda/eda.hpp"
#include "deep_eda/problems.hpp"

namespace deep_eda {

// Flat key = value run configuration. File values overlay the defaults,
// CLI flags overlay the file.
struct Config {
    std::string problem = "onemax";
    int n = 50;
    int trap_k = 5;
    int nk_k = 4;
    std::uint64_t nk_seed = 1;
    std::string nk_file;  // when set, the NK instance is loaded instead of generated

    std::string model = "dbm";
    int popsize = 100;
    int max_generations = 150;
    int stagnation_limit = 50;
    std::uint64_t seed = 1;
    bool use_mask = true;

    std::vector<int> grid = default_grid();
    int runs = 20;
    int jobs = 1;
    bool early_stop = true;

    double rbm_learning_rate = 0.1;
    int rbm_epochs = 50;
    int rbm_batch_size = 100;
    int rbm_cd_steps = 1;
    double rbm_momentum = 0.5;
    double rbm_final_momentum = 0.9;
    int rbm_momentum_switch_epoch = 5;
    double rbm_weight_decay = 0.0002;

    int m1 = 0;  // 0: n
    int m2 = 0;  // 0: ceil(n/2)
    double finetune_learning_rate = 0.05;
    int finetune_epochs = 30;
    int finetune_batch_size = 100;
    double finetune_momentum = 0.5;
    double finetune_weight_decay = 0.0002;
    int gibbs_steps = 5;
    int mean_field_iterations = 10;
    int sample_iterations = 25;

    static std::vector<int> default_grid();
    static Config from_file(const std::string& path);

    void set(const std::string& key, const std::string& value);
    std::string dump() const;

    ProblemInstance make_problem() const;
    EdaConfig make_eda_config() const;
};

struct SweepSpec {
    ProblemInstance problem;
    std::vector<int> grid;
    int runs_per_size = 20;
    EdaConfig run_config;  // population_size and seed get overwritten per run
    std::uint64_t base_seed = 1;
    bool early_stop = true;  // stop the grid once the >=90% size is found
    int jobs = 1;

    void validate() const;
};

struct RunRecord {
    std::string problem;
    int popsize = 0;
    std::uint64_t seed = 0;
    RunResult result;
};

struct SizeSummary {
    int popsize = 0;
    int runs = 0;
    int successes = 0;
    // statistics over successful runs only
    double mean_unique_evals = 0.0;
    double std_unique_evals = 0.0;
    double mean_wall_s = 0.0;
    double std_wall_s = 0.0;
};

struct SweepSummary {
    std::string problem;
    int runs_per_size = 0;
    std::vector<SizeSummary> sizes;
    std::vector<RunRecord> run_log;
    int min_size_50 = -1;  // smallest grid size solving >= ceil(0.5 runs); -1 if none
    int min_size_90 = -1;
};

int success_threshold_50(int runs);
int success_threshold_90(int runs);

// Runs runs_per_size seeded runs per grid entry, ascending; run seeds are
// base_seed + size_index * runs + run_index. Individual failures are
// recorded, never abort the sweep. Runs fan out over `jobs` workers and
// merge by run index, so everything except wall times is reproducible.
SweepSummary run_sweep(const SweepSpec& spec);

void export_results_csv(const SweepSummary& summary, const std::string& path);
void export_run_log_csv(const std::vector<RunRecord>& runs, const std::string& path);
std::vector<SizeSummary> parse_results_csv(const std::string& path);
std::vector<RunRecord> parse_run_log_csv(const std::string& path);

// W1 as a text PGM: one row per first-layer hidden neuron, one column per
// visible variable. Symmetric linear gray map, scale = max |w|: -scale is
// black, +scale white, zero mid-gray.
void export_weight_heatmap(const DbmParams& p, const std::string& path);

// Fraction of hidden-1 neurons whose `block` largest-magnitude incoming
// weights all fall inside one aligned block of `block` consecutive visible
// variables.
double block_alignment_fraction(const Matrix& W1, int block);

} // namespace deep_eda
