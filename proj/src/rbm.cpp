#include "deep_eda/rbm.hpp"

#include <algorithm>
#include <cmath>

#include "deep_eda/kernels.hpp"

namespace deep_eda {

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0 && learning_rate < 1.0))
        throw std::invalid_argument("train config: need 0 <= learning_rate < 1");
    if (epochs < 0) throw std::invalid_argument("train config: epochs must be >= 0");
    if (batch_size < 1) throw std::invalid_argument("train config: batch_size must be >= 1");
    if (cd_steps < 1) throw std::invalid_argument("train config: cd_steps must be >= 1");
}

Matrix hidden_probs(const Matrix& V, const RbmParams& p) {
    return kernels::affine_sigmoid(V, p.W, p.c, 1.0);
}

Matrix visible_probs(const Matrix& H, const RbmParams& p) {
    return kernels::affine_sigmoid_t(H, p.W, p.b, 1.0);
}

namespace {

bool all_finite(const RbmParams& p) {
    for (double v : p.W.data)
        if (!std::isfinite(v)) return false;
    for (double v : p.b)
        if (!std::isfinite(v)) return false;
    for (double v : p.c)
        if (!std::isfinite(v)) return false;
    return true;
}

} // namespace

RbmParams cd_update(const Matrix& batch, const RbmParams& p, CdState& state,
                    const TrainConfig& cfg, Rng& rng,
                    double up_scale, double down_scale) {
    require_shape(batch.rows > 0 && batch.cols == p.n(), "cd_update: batch vs params");

    // positive phase: data-clamped hidden probabilities
    const Matrix h_pos = kernels::affine_sigmoid(batch, p.W, p.c, up_scale);

    // negative phase: k alternating stochastic Gibbs steps
    Matrix h_state = kernels::bernoulli_sample(h_pos, rng);
    Matrix v_neg;
    Matrix h_neg_probs;
    for (int step = 0; step < cfg.cd_steps; ++step) {
        const Matrix v_probs = kernels::affine_sigmoid_t(h_state, p.W, p.b, down_scale);
        v_neg = kernels::bernoulli_sample(v_probs, rng);
        h_neg_probs = kernels::affine_sigmoid(v_neg, p.W, p.c, up_scale);
        if (step + 1 < cfg.cd_steps) h_state = kernels::bernoulli_sample(h_neg_probs, rng);
    }

    const Matrix pos_W = kernels::outer_mean(batch, h_pos);
    const Matrix neg_W = kernels::outer_mean(v_neg, h_neg_probs);
    const Vector pos_b = kernels::column_mean(batch);
    const Vector neg_b = kernels::column_mean(v_neg);
    const Vector pos_c = kernels::column_mean(h_pos);
    const Vector neg_c = kernels::column_mean(h_neg_probs);

    RbmParams out = p;
    const double lr = cfg.learning_rate;
    for (size_t i = 0; i < out.W.data.size(); ++i) {
        state.vel_W.data[i] = cfg.momentum * state.vel_W.data[i] +
                              lr * (pos_W.data[i] - neg_W.data[i]) -
                              lr * cfg.weight_decay * p.W.data[i];
        out.W.data[i] += state.vel_W.data[i];
    }
    for (int i = 0; i < p.n(); ++i) {
        state.vel_b[i] = cfg.momentum * state.vel_b[i] + lr * (pos_b[i] - neg_b[i]);
        out.b[i] += state.vel_b[i];
    }
    for (int j = 0; j < p.m(); ++j) {
        state.vel_c[j] = cfg.momentum * state.vel_c[j] + lr * (pos_c[j] - neg_c[j]);
        out.c[j] += state.vel_c[j];
    }

    if (!all_finite(out)) throw TrainingDivergence("rbm: parameters went non-finite");
    return out;
}

RbmParams train_rbm(const Matrix& data, int n, int m, const TrainConfig& cfg,
                    double up_scale, double down_scale) {
    cfg.validate();
    require_shape(data.cols == n && m >= 1, "train_rbm: data vs shape");

    Rng rng(cfg.seed);
    RbmParams p;
    p.W = Matrix(n, m);
    for (auto& w : p.W.data) w = rng.gaussian(0.0, 0.01);
    p.c = Vector(m, 0.0);
    // visible biases start at the log-odds of the per-bit training means
    p.b = Vector(n, 0.0);
    if (data.rows > 0 && !getenv("DEDA_ZERO_BIAS_INIT")) {
        const Vector means = kernels::column_mean(data);
        for (int i = 0; i < n; ++i) {
            const double q = std::clamp(means[i], 0.01, 0.99);
            p.b[i] = std::log(q / (1.0 - q));
        }
    }

    if (cfg.epochs == 0 || data.rows == 0) return p;

    CdState state(p);
    const int batch = std::min(cfg.batch_size, data.rows);
    std::vector<int> order(data.rows);
    for (int i = 0; i < data.rows; ++i) order[i] = i;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        TrainConfig step_cfg = cfg;
        if (epoch >= cfg.momentum_switch_epoch) step_cfg.momentum = cfg.final_momentum;
        rng.shuffle(order);
        for (int start = 0; start < data.rows; start += batch) {
            const int rows = std::min(batch, data.rows - start);
            Matrix mb(rows, n);
            for (int r = 0; r < rows; ++r)
                std::copy_n(data.row(order[start + r]), n, mb.row(r));
            p = cd_update(mb, p, state, step_cfg, rng, up_scale, down_scale);
        }
    }
    return p;
}

} // namespace deep_eda
