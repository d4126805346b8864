#include "deep_eda/eda.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "deep_eda/kernels.hpp"

namespace deep_eda {

void EdaConfig::validate() const {
    if (population_size < 4 || population_size % 2 != 0)
        throw std::invalid_argument("eda config: population_size must be even and >= 4");
    if (max_generations < 1 || stagnation_limit < 1)
        throw std::invalid_argument("eda config: generation limits must be >= 1");
    if (tournament_size != 2)
        throw std::invalid_argument("eda config: tournament size is fixed at 2");
}

XorMask make_xor_mask(int population_size, int n, Rng& rng, bool enabled) {
    XorMask mask;
    mask.R = Matrix(population_size, n, 0.0);
    if (!enabled) return mask;
    Vector row(n);
    for (int i = 0; i < n; ++i) row[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    for (int r = 0; r < population_size; ++r)
        std::copy(row.begin(), row.end(), mask.R.row(r));
    return mask;
}

Matrix apply_mask(const Matrix& batch, const XorMask& mask) {
    require_shape(batch.cols == mask.R.cols && batch.rows <= mask.R.rows,
                  "apply_mask: batch vs mask");
    Matrix out(batch.rows, batch.cols);
    for (int r = 0; r < batch.rows; ++r) {
        const double* x = batch.row(r);
        const double* m = mask.R.row(r);
        double* o = out.row(r);
        for (int c = 0; c < batch.cols; ++c) o[c] = x[c] != m[c] ? 1.0 : 0.0;
    }
    return out;
}

Matrix genomes_to_matrix(const std::vector<Genome>& genomes) {
    if (genomes.empty()) return {};
    Matrix out(static_cast<int>(genomes.size()), static_cast<int>(genomes[0].size()));
    for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) out(r, c) = genomes[r][c];
    return out;
}

std::vector<Genome> matrix_to_genomes(const Matrix& batch) {
    std::vector<Genome> out(batch.rows, Genome(batch.cols));
    for (int r = 0; r < batch.rows; ++r)
        for (int c = 0; c < batch.cols; ++c)
            out[r][c] = batch(r, c) != 0.0 ? 1 : 0;
    return out;
}

double EvalCache::evaluate(const ProblemInstance& problem, const Genome& g) {
    std::string key(g.begin(), g.end());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double f = problem.evaluate(g);
    cache_.emplace(std::move(key), f);
    return f;
}

Population tournament_select(const Population& pop, Rng& rng) {
    if (pop.size() % 2 != 0)
        throw std::invalid_argument("tournament_select: population size must be even");
    std::vector<int> order(pop.size());
    for (int i = 0; i < pop.size(); ++i) order[i] = i;
    rng.shuffle(order);

    Population parents;
    parents.genomes.reserve(pop.size() / 2);
    parents.fitness.reserve(pop.size() / 2);
    for (int i = 0; i < pop.size(); i += 2) {
        const int a = order[i], b = order[i + 1];
        int winner;
        if (pop.fitness[a] > pop.fitness[b]) winner = a;
        else if (pop.fitness[b] > pop.fitness[a]) winner = b;
        else winner = rng.bernoulli(0.5) ? a : b;
        parents.genomes.push_back(pop.genomes[winner]);
        parents.fitness.push_back(pop.fitness[winner]);
    }
    return parents;
}

Vector umda_fit(const Matrix& parents) {
    require_shape(parents.rows > 0, "umda_fit: empty parents");
    Vector marginals = kernels::column_mean(parents);
    const double lo = 1.0 / parents.cols;
    for (auto& m : marginals) m = std::clamp(m, lo, 1.0 - lo);
    return marginals;
}

Matrix umda_sample(const Vector& marginals, int count, Rng& rng) {
    Matrix out(count, static_cast<int>(marginals.size()));
    for (int r = 0; r < count; ++r)
        for (int c = 0; c < out.cols; ++c)
            out(r, c) = rng.bernoulli(marginals[c]) ? 1.0 : 0.0;
    return out;
}

Matrix UmdaModel::fit_and_sample(const Matrix& training, int count, Rng& rng) {
    return umda_sample(umda_fit(training), count, rng);
}

Matrix DbmModel::fit_and_sample(const Matrix& training, int count, Rng& rng) {
    const int n = training.cols;
    NetworkShape shape;
    shape.n = n;
    shape.m1 = hyper_.m1 > 0 ? hyper_.m1 : n;
    shape.m2 = hyper_.m2 > 0 ? hyper_.m2 : (n + 1) / 2;

    TrainConfig cfg1 = hyper_.rbm;
    cfg1.seed = rng.raw();
    TrainConfig cfg2 = hyper_.rbm;
    cfg2.seed = rng.raw();
    DbmParams params = pretrain(training, shape, cfg1, cfg2);

    TrainConfig fcfg = hyper_.finetune;
    fcfg.seed = rng.raw();
    const int particle_count = std::min(fcfg.batch_size, training.rows);
    FantasyParticles particles = random_particles(shape, particle_count, rng);
    FinetuneResult ft = finetune(training, params, fcfg, std::move(particles),
                                 hyper_.mean_field_iterations);
    last_ = ft.params;

    Matrix init(count, n);
    for (int r = 0; r < count; ++r)
        std::copy_n(training.row(r % training.rows), n, init.row(r));
    return sample_population(ft.params, init, hyper_.sample_iterations, rng);
}

namespace {

Population random_population(const ProblemInstance& problem, int size, Rng& rng,
                             EvalCache& cache) {
    Population pop;
    pop.genomes.resize(size, Genome(problem.n));
    pop.fitness.resize(size);
    for (auto& g : pop.genomes)
        for (auto& bit : g) bit = rng.bernoulli(0.5) ? 1 : 0;
    for (int i = 0; i < size; ++i) pop.fitness[i] = cache.evaluate(problem, pop.genomes[i]);
    return pop;
}

} // namespace

RunResult run_eda(const ProblemInstance& problem, const EdaConfig& cfg) {
    if (cfg.model == ModelKind::Umda) {
        UmdaModel model;
        return run_eda(problem, cfg, model);
    }
    DbmModel model(cfg.dbm);
    return run_eda(problem, cfg, model);
}

RunResult run_eda(const ProblemInstance& problem, const EdaConfig& cfg, ModelBackend& model) {
    cfg.validate();
    if (problem.n < 1) throw std::invalid_argument("run_eda: invalid problem");

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    // separate streams so the mask draw does not perturb the loop
    Rng base(cfg.seed);
    Rng init_rng = base.derive(1);
    Rng mask_rng = base.derive(2);
    Rng loop_rng = base.derive(3);

    const XorMask mask = make_xor_mask(cfg.population_size, problem.n, mask_rng, cfg.use_mask);

    EvalCache cache;
    RunResult res;
    Population pop = random_population(problem, cfg.population_size, init_rng, cache);
    double best = *std::max_element(pop.fitness.begin(), pop.fitness.end());

    if (best >= problem.optimum_fitness) {
        res.solved = true;
        res.best_fitness = best;
        res.generations_used = 0;
        res.unique_evaluations = cache.unique_count();
        res.wall_seconds = elapsed();
        return res;
    }

    int stagnation = 0;
    for (int gen = 1; gen <= cfg.max_generations; ++gen) {
        res.generations_used = gen;

        Population parents = tournament_select(pop, loop_rng);
        const Matrix masked = apply_mask(genomes_to_matrix(parents.genomes), mask);
        const int count = cfg.population_size - parents.size();

        Matrix samples;
        try {
            samples = model.fit_and_sample(masked, count, loop_rng);
        } catch (const TrainingDivergence& e) {
            res.error = e.what();
            break;
        }
        const std::vector<Genome> candidates = matrix_to_genomes(apply_mask(samples, mask));

        pop = std::move(parents);
        for (const auto& g : candidates) {
            pop.genomes.push_back(g);
            pop.fitness.push_back(cache.evaluate(problem, g));
        }

        const double gen_best = *std::max_element(pop.fitness.begin(), pop.fitness.end());
        const bool improved = gen_best > best;
        best = std::max(best, gen_best);

        if (cfg.observer) cfg.observer({gen, best, model.last_params()});

        if (best >= problem.optimum_fitness) {
            res.solved = true;
            break;
        }
        stagnation = improved ? 0 : stagnation + 1;
        if (stagnation >= cfg.stagnation_limit) break;
    }

    res.best_fitness = best;
    res.unique_evaluations = cache.unique_count();
    res.wall_seconds = elapsed();
    return res;
}

} // namespace deep_eda
