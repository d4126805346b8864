#include "deep_eda/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "deep_eda/textio.hpp"

namespace deep_eda {

std::vector<int> Config::default_grid() {
    std::vector<int> grid = {100, 200, 300, 400, 500, 1000, 1500};
    for (int s = 2000; s <= 16000; s += 1000) grid.push_back(s);
    return grid;
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": " + v);
}

std::vector<int> parse_int_list(const std::string& v) {
    std::vector<int> out;
    std::string item;
    std::istringstream iss(v);
    while (std::getline(iss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

} // namespace

void Config::set(const std::string& key, const std::string& value) {
    if (key == "problem") problem = value;
    else if (key == "n") n = std::stoi(value);
    else if (key == "trap_k") trap_k = std::stoi(value);
    else if (key == "nk_k") nk_k = std::stoi(value);
    else if (key == "nk_seed") nk_seed = std::stoull(value);
    else if (key == "nk_file") nk_file = value;
    else if (key == "model") model = value;
    else if (key == "popsize") popsize = std::stoi(value);
    else if (key == "max_generations") max_generations = std::stoi(value);
    else if (key == "stagnation_limit") stagnation_limit = std::stoi(value);
    else if (key == "seed") seed = std::stoull(value);
    else if (key == "use_mask") use_mask = parse_bool(value, key);
    else if (key == "grid") grid = parse_int_list(value);
    else if (key == "runs") runs = std::stoi(value);
    else if (key == "jobs") jobs = std::stoi(value);
    else if (key == "early_stop") early_stop = parse_bool(value, key);
    else if (key == "rbm_learning_rate") rbm_learning_rate = std::stod(value);
    else if (key == "rbm_epochs") rbm_epochs = std::stoi(value);
    else if (key == "rbm_batch_size") rbm_batch_size = std::stoi(value);
    else if (key == "rbm_cd_steps") rbm_cd_steps = std::stoi(value);
    else if (key == "rbm_momentum") rbm_momentum = std::stod(value);
    else if (key == "rbm_final_momentum") rbm_final_momentum = std::stod(value);
    else if (key == "rbm_momentum_switch_epoch") rbm_momentum_switch_epoch = std::stoi(value);
    else if (key == "rbm_weight_decay") rbm_weight_decay = std::stod(value);
    else if (key == "m1") m1 = std::stoi(value);
    else if (key == "m2") m2 = std::stoi(value);
    else if (key == "finetune_learning_rate") finetune_learning_rate = std::stod(value);
    else if (key == "finetune_epochs") finetune_epochs = std::stoi(value);
    else if (key == "finetune_batch_size") finetune_batch_size = std::stoi(value);
    else if (key == "finetune_momentum") finetune_momentum = std::stod(value);
    else if (key == "finetune_weight_decay") finetune_weight_decay = std::stod(value);
    else if (key == "gibbs_steps") gibbs_steps = std::stoi(value);
    else if (key == "mean_field_iterations") mean_field_iterations = std::stoi(value);
    else if (key == "sample_iterations") sample_iterations = std::stoi(value);
    else throw std::invalid_argument("config: unknown key: " + key);
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw ParseError("config: expected 'key = value'", lineno);
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("config: empty key", lineno);
        try {
            cfg.set(key, value);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    return cfg;
}

std::string Config::dump() const {
    std::ostringstream out;
    out << "problem = " << problem << '\n';
    out << "n = " << n << '\n';
    out << "trap_k = " << trap_k << '\n';
    out << "nk_k = " << nk_k << '\n';
    out << "nk_seed = " << nk_seed << '\n';
    out << "nk_file = " << nk_file << '\n';
    out << "model = " << model << '\n';
    out << "popsize = " << popsize << '\n';
    out << "max_generations = " << max_generations << '\n';
    out << "stagnation_limit = " << stagnation_limit << '\n';
    out << "seed = " << seed << '\n';
    out << "use_mask = " << (use_mask ? "true" : "false") << '\n';
    out << "grid = " << join_ints(grid) << '\n';
    out << "runs = " << runs << '\n';
    out << "jobs = " << jobs << '\n';
    out << "early_stop = " << (early_stop ? "true" : "false") << '\n';
    out << "rbm_learning_rate = " << format_real(rbm_learning_rate) << '\n';
    out << "rbm_epochs = " << rbm_epochs << '\n';
    out << "rbm_batch_size = " << rbm_batch_size << '\n';
    out << "rbm_cd_steps = " << rbm_cd_steps << '\n';
    out << "rbm_momentum = " << format_real(rbm_momentum) << '\n';
    out << "rbm_final_momentum = " << format_real(rbm_final_momentum) << '\n';
    out << "rbm_momentum_switch_epoch = " << rbm_momentum_switch_epoch << '\n';
    out << "rbm_weight_decay = " << format_real(rbm_weight_decay) << '\n';
    out << "m1 = " << m1 << '\n';
    out << "m2 = " << m2 << '\n';
    out << "finetune_learning_rate = " << format_real(finetune_learning_rate) << '\n';
    out << "finetune_epochs = " << finetune_epochs << '\n';
    out << "finetune_batch_size = " << finetune_batch_size << '\n';
    out << "finetune_momentum = " << format_real(finetune_momentum) << '\n';
    out << "finetune_weight_decay = " << format_real(finetune_weight_decay) << '\n';
    out << "gibbs_steps = " << gibbs_steps << '\n';
    out << "mean_field_iterations = " << mean_field_iterations << '\n';
    out << "sample_iterations = " << sample_iterations << '\n';
    return out.str();
}

ProblemInstance Config::make_problem() const {
    switch (problem_kind_from_name(problem)) {
        case ProblemKind::Onemax: return make_onemax(n);
        case ProblemKind::Trap: return make_trap(n, trap_k);
        case ProblemKind::Hiff: return make_hiff(n);
        case ProblemKind::Nk:
            if (!nk_file.empty()) return make_nk_problem(load_nk_instance(nk_file));
            return make_nk_problem(generate_nk_instance(n, nk_k, nk_seed));
    }
    throw std::logic_error("unreachable");
}

EdaConfig Config::make_eda_config() const {
    EdaConfig cfg;
    cfg.population_size = popsize;
    cfg.max_generations = max_generations;
    cfg.stagnation_limit = stagnation_limit;
    cfg.seed = seed;
    cfg.use_mask = use_mask;
    cfg.model = model == "umda" ? ModelKind::Umda
              : model == "dbm" ? ModelKind::Dbm
                               : throw std::invalid_argument("config: unknown model: " + model);

    cfg.dbm.rbm.learning_rate = rbm_learning_rate;
    cfg.dbm.rbm.epochs = rbm_epochs;
    cfg.dbm.rbm.batch_size = rbm_batch_size;
    cfg.dbm.rbm.cd_steps = rbm_cd_steps;
    cfg.dbm.rbm.momentum = rbm_momentum;
    cfg.dbm.rbm.final_momentum = rbm_final_momentum;
    cfg.dbm.rbm.momentum_switch_epoch = rbm_momentum_switch_epoch;
    cfg.dbm.rbm.weight_decay = rbm_weight_decay;

    cfg.dbm.m1 = m1;
    cfg.dbm.m2 = m2;
    cfg.dbm.finetune.learning_rate = finetune_learning_rate;
    cfg.dbm.finetune.epochs = finetune_epochs;
    cfg.dbm.finetune.batch_size = finetune_batch_size;
    cfg.dbm.finetune.momentum = finetune_momentum;
    cfg.dbm.finetune.final_momentum = finetune_momentum;
    cfg.dbm.finetune.weight_decay = finetune_weight_decay;
    cfg.dbm.finetune.cd_steps = gibbs_steps;
    cfg.dbm.mean_field_iterations = mean_field_iterations;
    cfg.dbm.sample_iterations = sample_iterations;
    return cfg;
}

void SweepSpec::validate() const {
    if (grid.empty()) throw std::invalid_argument("sweep: empty population grid");
    for (size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw std::invalid_argument("sweep: population grid must be strictly increasing");
    if (runs_per_size < 1) throw std::invalid_argument("sweep: runs_per_size must be >= 1");
}

int success_threshold_50(int runs) { return (runs + 1) / 2; }
int success_threshold_90(int runs) { return (9 * runs + 9) / 10; }

namespace {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_sample_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return out;
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return out;
}

SizeSummary summarize_size(int popsize, const std::vector<RunRecord>& records) {
    SizeSummary s;
    s.popsize = popsize;
    s.runs = static_cast<int>(records.size());
    std::vector<double> evals, walls;
    for (const auto& rec : records) {
        if (!rec.result.solved) continue;
        ++s.successes;
        evals.push_back(static_cast<double>(rec.result.unique_evaluations));
        walls.push_back(rec.result.wall_seconds);
    }
    const MeanStd e = mean_sample_std(evals);
    const MeanStd w = mean_sample_std(walls);
    s.mean_unique_evals = e.mean;
    s.std_unique_evals = e.std;
    s.mean_wall_s = w.mean;
    s.std_wall_s = w.std;
    return s;
}

} // namespace

SweepSummary run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepSummary summary;
    summary.problem = problem_kind_name(spec.problem.kind);
    summary.runs_per_size = spec.runs_per_size;

    const int need50 = success_threshold_50(spec.runs_per_size);
    const int need90 = success_threshold_90(spec.runs_per_size);

    for (size_t size_idx = 0; size_idx < spec.grid.size(); ++size_idx) {
        const int popsize = spec.grid[size_idx];
        std::vector<RunRecord> records(spec.runs_per_size);

#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, spec.jobs))
        for (int run = 0; run < spec.runs_per_size; ++run) {
            EdaConfig cfg = spec.run_config;
            cfg.population_size = popsize;
            cfg.seed = spec.base_seed +
                       static_cast<std::uint64_t>(size_idx) * spec.runs_per_size +
                       static_cast<std::uint64_t>(run);
            RunRecord rec;
            rec.problem = summary.problem;
            rec.popsize = popsize;
            rec.seed = cfg.seed;
            rec.result = run_eda(spec.problem, cfg);
            records[run] = std::move(rec);
        }

        const SizeSummary s = summarize_size(popsize, records);
        summary.sizes.push_back(s);
        summary.run_log.insert(summary.run_log.end(),
                               std::make_move_iterator(records.begin()),
                               std::make_move_iterator(records.end()));

        if (summary.min_size_50 < 0 && s.successes >= need50) summary.min_size_50 = popsize;
        if (summary.min_size_90 < 0 && s.successes >= need90) {
            summary.min_size_90 = popsize;
            if (spec.early_stop) break;
        }
    }
    return summary;
}

void export_results_csv(const SweepSummary& summary, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << "problem,popsize,runs,successes,mean_unique_evals,std_unique_evals,"
           "mean_wall_s,std_wall_s\n";
    for (const auto& s : summary.sizes) {
        out << summary.problem << ',' << s.popsize << ',' << s.runs << ',' << s.successes
            << ',' << format_real(s.mean_unique_evals) << ',' << format_real(s.std_unique_evals)
            << ',' << format_real(s.mean_wall_s) << ',' << format_real(s.std_wall_s) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void export_run_log_csv(const std::vector<RunRecord>& runs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << "problem,popsize,seed,solved,best_fitness,generations,unique_evals,wall_s\n";
    for (const auto& r : runs) {
        out << r.problem << ',' << r.popsize << ',' << r.seed << ','
            << (r.result.solved ? 1 : 0) << ',' << format_real(r.result.best_fitness) << ','
            << r.result.generations_used << ',' << r.result.unique_evaluations << ','
            << format_real(r.result.wall_seconds) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing csv header", 1);
    if (line != expected_header) throw ParseError("unexpected csv header: " + line, 1);
    std::vector<std::vector<std::string>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream iss(line);
        while (std::getline(iss, field, ',')) fields.push_back(field);
        if (fields.size() != std::count(expected_header.begin(), expected_header.end(), ',') + 1u)
            throw ParseError("wrong field count in csv row", lineno);
        rows.push_back(std::move(fields));
    }
    return rows;
}

} // namespace

std::vector<SizeSummary> parse_results_csv(const std::string& path) {
    const auto rows = read_csv(path,
                               "problem,popsize,runs,successes,mean_unique_evals,"
                               "std_unique_evals,mean_wall_s,std_wall_s");
    std::vector<SizeSummary> out;
    for (const auto& f : rows) {
        SizeSummary s;
        s.popsize = std::stoi(f[1]);
        s.runs = std::stoi(f[2]);
        s.successes = std::stoi(f[3]);
        s.mean_unique_evals = std::stod(f[4]);
        s.std_unique_evals = std::stod(f[5]);
        s.mean_wall_s = std::stod(f[6]);
        s.std_wall_s = std::stod(f[7]);
        out.push_back(s);
    }
    return out;
}

std::vector<RunRecord> parse_run_log_csv(const std::string& path) {
    const auto rows = read_csv(path,
                               "problem,popsize,seed,solved,best_fitness,generations,"
                               "unique_evals,wall_s");
    std::vector<RunRecord> out;
    for (const auto& f : rows) {
        RunRecord r;
        r.problem = f[0];
        r.popsize = std::stoi(f[1]);
        r.seed = std::stoull(f[2]);
        r.result.solved = std::stoi(f[3]) != 0;
        r.result.best_fitness = std::stod(f[4]);
        r.result.generations_used = std::stoi(f[5]);
        r.result.unique_evaluations = std::stol(f[6]);
        r.result.wall_seconds = std::stod(f[7]);
        out.push_back(std::move(r));
    }
    return out;
}

void export_weight_heatmap(const DbmParams& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    const Matrix& W = p.W1;
    double scale = 0.0;
    for (double w : W.data) scale = std::max(scale, std::fabs(w));

    out << "P2\n" << W.rows << ' ' << W.cols << "\n255\n";
    // one image row per hidden neuron: pixel (j, i) is W1(i, j)
    for (int j = 0; j < W.cols; ++j) {
        for (int i = 0; i < W.rows; ++i) {
            int gray = 128;
            if (scale > 0.0) {
                gray = static_cast<int>(std::lround((W(i, j) / scale + 1.0) * 0.5 * 255.0));
                gray = std::clamp(gray, 0, 255);
            }
            out << (i ? " " : "") << gray;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

double block_alignment_fraction(const Matrix& W1, int block) {
    if (block < 1 || W1.rows % block != 0)
        throw std::invalid_argument("block_alignment_fraction: rows must divide into blocks");
    if (W1.cols == 0) return 0.0;
    int aligned = 0;
    std::vector<int> idx(W1.rows);
    for (int j = 0; j < W1.cols; ++j) {
        for (int i = 0; i < W1.rows; ++i) idx[i] = i;
        std::partial_sort(idx.begin(), idx.begin() + block, idx.end(),
                          [&](int a, int b) {
                              return std::fabs(W1(a, j)) > std::fabs(W1(b, j));
                          });
        const int home = idx[0] / block;
        bool same = true;
        for (int t = 1; t < block; ++t) same = same && idx[t] / block == home;
        aligned += same ? 1 : 0;
    }
    return static_cast<double>(aligned) / W1.cols;
}

} // namespace deep_eda
