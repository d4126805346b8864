#pragma once

#include <cstdint>
#include <string>

#include "deep_eda/matrix.hpp"
#include "deep_eda/rbm.hpp"
#include "deep_eda/rng.hpp"

namespace deep_eda {

struct NetworkShape {
    int n = 1;   // visible units
    int m1 = 1;  // first hidden layer
    int m2 = 1;  // second hidden layer

    void validate() const {
        if (n < 1 || m1 < 1 || m2 < 1)
            throw std::invalid_argument("network shape: all layer sizes must be >= 1");
    }
};

// Two-hidden-layer DBM: W1 couples v to h1, W2 couples h1 to h2, plus one
// bias vector per layer.
struct DbmParams {
    Matrix W1;  // n x m1
    Matrix W2;  // m1 x m2
    Vector b;   // n
    Vector c1;  // m1
    Vector c2;  // m2

    NetworkShape shape() const { return {W1.rows, W1.cols, W2.cols}; }
};

// Persistent negative-phase chain states; binary, one row per particle.
struct FantasyParticles {
    Matrix v;
    Matrix h1;
    Matrix h2;
};

// Variational activation probabilities from the positive-phase fixed point.
struct MeanFieldState {
    Matrix mu1;  // batch x m1
    Matrix mu2;  // batch x m2
};

// -v.W1.h1 - h1.W2.h2 - b.v - c1.h1 - c2.h2; zero biases reduce it to the
// pure coupling form.
double energy(const Vector& v, const Vector& h1, const Vector& h2, const DbmParams& p);

// Enumeration oracle: P(v) by summing exp(-E) over all hidden states and
// normalizing over all joint states. Log-domain with max subtraction.
// Refuses models with more than `kEnumerationLimit` total units.
inline constexpr int kEnumerationLimit = 20;
double exact_visible_probability(const Vector& v, const DbmParams& p);
double exact_log_partition(const DbmParams& p);
// Mean log P(v) over the rows of `data`.
double exact_data_log_likelihood(const Matrix& data, const DbmParams& p);

// Conditionals (rows may be binary states or probabilities):
//   cond_h1: P(h1=1 | v, h2) = sigm(V.W1 + H2.W2^T + c1)
//   cond_h2: P(h2=1 | h1)    = sigm(H1.W2 + c2)
//   cond_v : P(v=1  | h1)    = sigm(H1.W1^T + b)
Matrix cond_h1(const Matrix& V, const Matrix& H2, const DbmParams& p);
Matrix cond_h2(const Matrix& H1, const DbmParams& p);
Matrix cond_v(const Matrix& H1, const DbmParams& p);

// Greedy layer-wise pretraining: RBM1 on the data (doubled upward weights),
// RBM2 on stochastic binary samples of RBM1's hidden representation (doubled
// downward weights). The trained weights are taken as-is; the middle-layer
// bias merges the two RBMs' views of h1.
DbmParams pretrain(const Matrix& data, const NetworkShape& shape,
                   const TrainConfig& cfg1, const TrainConfig& cfg2);

// Positive-phase mean field: mu1 from the data ignoring h2, mu2 from mu1,
// then `iterations` alternating refinement rounds.
MeanFieldState mean_field_positive(const Matrix& v_batch, const DbmParams& p, int iterations);

// Advances the persistent chain `steps` times: h1 | (v,h2), then h2 | h1,
// then v | h1, all stochastic.
FantasyParticles gibbs_negative(FantasyParticles particles, const DbmParams& p,
                                int steps, Rng& rng);

FantasyParticles random_particles(const NetworkShape& shape, int count, Rng& rng);

// One fine-tuning run over cfg.epochs epochs of shuffled mini-batches.
// Positive statistics come from the mean-field state, negative statistics
// from the persistent particles advanced cfg.cd_steps Gibbs steps per
// update. The update ascends the data log-likelihood.
struct FinetuneResult {
    DbmParams params;
    FantasyParticles particles;
};
FinetuneResult finetune(const Matrix& data, const DbmParams& p, const TrainConfig& cfg,
                        FantasyParticles particles, int mean_field_iterations = 10);

// Model sampling: visible states initialized from `init`, hidden layers by
// one stochastic upward pass, then `iterations` chain steps. Returns the
// final binary visible states. iterations == 0 returns init unchanged.
Matrix sample_population(const DbmParams& p, const Matrix& init, int iterations, Rng& rng);

// Plain-text snapshot: header "dbm <n> <m1> <m2>", then W1, W2, b, c1, c2.
void save_dbm_params(const DbmParams& p, const std::string& path);
DbmParams load_dbm_params(const std::string& path);

} // namespace deep_eda
