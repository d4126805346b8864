#pragma once

#include <cstdint>
#include <string>

#include "deep_eda/errors.hpp"
#include "deep_eda/matrix.hpp"
#include "deep_eda/rng.hpp"

namespace deep_eda {

// Restricted Boltzmann Machine parameters: W couples n visible units to m
// hidden units, b and c are the visible and hidden biases.
struct RbmParams {
    Matrix W;  // n x m
    Vector b;  // n
    Vector c;  // m

    int n() const { return W.rows; }
    int m() const { return W.cols; }
};

struct TrainConfig {
    double learning_rate = 0.1;
    int epochs = 50;
    int batch_size = 100;   // capped at the data size
    int cd_steps = 1;       // Gibbs steps per update (negative-phase steps when fine-tuning)
    double momentum = 0.5;
    double final_momentum = 0.9;    // takes over after momentum_switch_epoch
    int momentum_switch_epoch = 5;
    double weight_decay = 0.0002;
    std::uint64_t seed = 1;

    void validate() const;
};

// Momentum velocities carried across cd_update calls within one training run.
struct CdState {
    Matrix vel_W;
    Vector vel_b;
    Vector vel_c;

    explicit CdState(const RbmParams& p)
        : vel_W(p.n(), p.m()), vel_b(p.n(), 0.0), vel_c(p.m(), 0.0) {}
};

// P(h=1|V) = sigm(V.W + c), row per batch entry.
Matrix hidden_probs(const Matrix& V, const RbmParams& p);

// P(v=1|H) = sigm(H.W^T + b).
Matrix visible_probs(const Matrix& H, const RbmParams& p);

// One CD-k step on a mini-batch. Positive statistics use data-clamped hidden
// probabilities; the Gibbs chain runs on stochastic binary states, with the
// final hidden probabilities entering the negative statistics. up_scale and
// down_scale multiply W in the respective passes (DBM pretraining
// compensation; 1.0 for a plain RBM). Throws TrainingDivergence if the
// update produces non-finite parameters.
RbmParams cd_update(const Matrix& batch, const RbmParams& p, CdState& state,
                    const TrainConfig& cfg, Rng& rng,
                    double up_scale = 1.0, double down_scale = 1.0);

// Full training run: small random init, shuffled mini-batches, momentum
// schedule. Deterministic given cfg.seed.
RbmParams train_rbm(const Matrix& data, int n, int m, const TrainConfig& cfg,
                    double up_scale = 1.0, double down_scale = 1.0);

// Plain-text snapshot: header "rbm <n> <m>", then W row-major, b, c.
void save_rbm_params(const RbmParams& p, const std::string& path);
RbmParams load_rbm_params(const std::string& path);

} // namespace deep_eda
