#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "deep_eda/dbm.hpp"
#include "deep_eda/matrix.hpp"
#include "deep_eda/problems.hpp"
#include "deep_eda/rng.hpp"

namespace deep_eda {

struct Population {
    std::vector<Genome> genomes;
    std::vector<double> fitness;  // aligned with genomes

    int size() const { return static_cast<int>(genomes.size()); }
};

// Per-run XOR encoding: one fixed mask row per population slot. All rows are
// copies of a single random vector so that masking flips bit meanings
// uniformly across individuals; per-slot independent rows would scramble
// the very correlations the model is supposed to learn.
struct XorMask {
    Matrix R;
};

XorMask make_xor_mask(int population_size, int n, Rng& rng, bool enabled = true);

// Elementwise XOR of row i of the batch with mask row i. Involution.
Matrix apply_mask(const Matrix& batch, const XorMask& mask);

enum class ModelKind { Dbm, Umda };

// Hyperparameters of the DBM backend; per-generation training seeds are
// drawn from the run RNG, so the seed fields inside are ignored here.
struct DbmHyper {
    TrainConfig rbm;                      // pretraining, both stacked RBMs
    TrainConfig finetune;                 // joint fine-tuning
    int mean_field_iterations = 10;
    int sample_iterations = 25;
    int m1 = 0;                           // 0: defaults to n
    int m2 = 0;                           // 0: defaults to ceil(n/2)

    DbmHyper() {
        finetune.learning_rate = 0.05;
        finetune.epochs = 30;
        finetune.cd_steps = 5;
        finetune.momentum = 0.5;
        finetune.final_momentum = 0.5;    // constant momentum during fine-tuning
    }
};

struct GenerationSnapshot {
    int generation = 0;
    double best_fitness = 0.0;
    const DbmParams* params = nullptr;  // null for model backends without one
};

struct EdaConfig {
    int population_size = 100;  // even, >= 4
    int max_generations = 150;
    int stagnation_limit = 50;
    int tournament_size = 2;    // fixed by the selection scheme
    std::uint64_t seed = 1;
    ModelKind model = ModelKind::Dbm;
    bool use_mask = true;
    DbmHyper dbm;
    std::function<void(const GenerationSnapshot&)> observer;

    void validate() const;
};

struct RunResult {
    bool solved = false;
    double best_fitness = 0.0;
    int generations_used = 0;
    long unique_evaluations = 0;
    double wall_seconds = 0.0;
    std::string error;  // set when model training diverged; run counts as failed
};

// Fitness store keyed by exact bit string; repeat submissions hit the cache
// and do not count as new evaluations.
class EvalCache {
public:
    double evaluate(const ProblemInstance& problem, const Genome& g);
    long unique_count() const { return static_cast<long>(cache_.size()); }

private:
    std::unordered_map<std::string, double> cache_;
};

// Pairwise tournament without replacement: the population is shuffled into
// disjoint pairs and the fitter member of each pair advances (ties decided
// by coin flip). Returns size/2 parents.
Population tournament_select(const Population& pop, Rng& rng);

// Model backends plug into the generational loop through this interface;
// everything they see is in the masked domain.
class ModelBackend {
public:
    virtual ~ModelBackend() = default;
    // Fit the training batch, then return `count` sampled rows. `init`
    // carries the training batch rows for chain-initialized samplers.
    virtual Matrix fit_and_sample(const Matrix& training, int count, Rng& rng) = 0;
    virtual const DbmParams* last_params() const { return nullptr; }
};

class DbmModel : public ModelBackend {
public:
    explicit DbmModel(DbmHyper hyper) : hyper_(hyper) {}
    Matrix fit_and_sample(const Matrix& training, int count, Rng& rng) override;
    const DbmParams* last_params() const override {
        return last_ ? &*last_ : nullptr;
    }

private:
    DbmHyper hyper_;
    std::optional<DbmParams> last_;
};

// Univariate marginal baseline (stand-in for a multivariate comparison arm).
Vector umda_fit(const Matrix& parents);
Matrix umda_sample(const Vector& marginals, int count, Rng& rng);

class UmdaModel : public ModelBackend {
public:
    Matrix fit_and_sample(const Matrix& training, int count, Rng& rng) override;
};

RunResult run_eda(const ProblemInstance& problem, const EdaConfig& cfg);
RunResult run_eda(const ProblemInstance& problem, const EdaConfig& cfg, ModelBackend& model);

// Conversions between genome rows and the 0/1 matrices the models consume.
Matrix genomes_to_matrix(const std::vector<Genome>& genomes);
std::vector<Genome> matrix_to_genomes(const Matrix& batch);

} // namespace deep_eda
