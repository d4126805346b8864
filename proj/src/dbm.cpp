#include "deep_eda/dbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deep_eda/kernels.hpp"

namespace deep_eda {

double energy(const Vector& v, const Vector& h1, const Vector& h2, const DbmParams& p) {
    const auto s = p.shape();
    require_shape(static_cast<int>(v.size()) == s.n && static_cast<int>(h1.size()) == s.m1 &&
                      static_cast<int>(h2.size()) == s.m2,
                  "energy: state vs params");
    double e = 0.0;
    for (int i = 0; i < s.n; ++i) {
        if (v[i] == 0.0) continue;
        const double* w = p.W1.row(i);
        double acc = 0.0;
        for (int j = 0; j < s.m1; ++j) acc += w[j] * h1[j];
        e -= v[i] * acc;
        e -= p.b[i] * v[i];
    }
    for (int j = 0; j < s.m1; ++j) {
        if (h1[j] == 0.0) continue;
        const double* w = p.W2.row(j);
        double acc = 0.0;
        for (int k = 0; k < s.m2; ++k) acc += w[k] * h2[k];
        e -= h1[j] * acc;
        e -= p.c1[j] * h1[j];
    }
    for (int k = 0; k < s.m2; ++k) e -= p.c2[k] * h2[k];
    return e;
}

namespace {

void bits_into(std::uint64_t code, Vector& out) {
    for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>((code >> i) & 1);
}

void check_enumerable(const NetworkShape& s) {
    if (s.n + s.m1 + s.m2 > kEnumerationLimit)
        throw std::invalid_argument("enumeration oracle: model too large (n+m1+m2 > " +
                                    std::to_string(kEnumerationLimit) + ")");
}

// log sum_{h1,h2} exp(-E(v,h1,h2)) via streaming max-subtraction.
double log_unnormalized_visible(const Vector& v, const DbmParams& p) {
    const auto s = p.shape();
    Vector h1(s.m1), h2(s.m2);
    double max_neg_e = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    const std::uint64_t n1 = std::uint64_t{1} << s.m1;
    const std::uint64_t n2 = std::uint64_t{1} << s.m2;
    for (std::uint64_t c1 = 0; c1 < n1; ++c1) {
        bits_into(c1, h1);
        for (std::uint64_t c2 = 0; c2 < n2; ++c2) {
            bits_into(c2, h2);
            const double neg_e = -energy(v, h1, h2, p);
            if (neg_e > max_neg_e) {
                acc = acc * std::exp(max_neg_e - neg_e) + 1.0;
                max_neg_e = neg_e;
            } else {
                acc += std::exp(neg_e - max_neg_e);
            }
        }
    }
    return max_neg_e + std::log(acc);
}

} // namespace

double exact_log_partition(const DbmParams& p) {
    const auto s = p.shape();
    check_enumerable(s);
    Vector v(s.n);
    double max_term = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    const std::uint64_t nv = std::uint64_t{1} << s.n;
    for (std::uint64_t code = 0; code < nv; ++code) {
        bits_into(code, v);
        const double term = log_unnormalized_visible(v, p);
        if (term > max_term) {
            acc = acc * std::exp(max_term - term) + 1.0;
            max_term = term;
        } else {
            acc += std::exp(term - max_term);
        }
    }
    return max_term + std::log(acc);
}

double exact_visible_probability(const Vector& v, const DbmParams& p) {
    const auto s = p.shape();
    check_enumerable(s);
    require_shape(static_cast<int>(v.size()) == s.n, "exact_visible_probability: v size");
    return std::exp(log_unnormalized_visible(v, p) - exact_log_partition(p));
}

double exact_data_log_likelihood(const Matrix& data, const DbmParams& p) {
    const auto s = p.shape();
    check_enumerable(s);
    require_shape(data.rows > 0 && data.cols == s.n, "exact_data_log_likelihood: data shape");
    const double log_z = exact_log_partition(p);
    double total = 0.0;
    Vector v(s.n);
    for (int r = 0; r < data.rows; ++r) {
        std::copy_n(data.row(r), s.n, v.begin());
        total += log_unnormalized_visible(v, p) - log_z;
    }
    return total / data.rows;
}

Matrix cond_h1(const Matrix& V, const Matrix& H2, const DbmParams& p) {
    return kernels::two_layer_sigmoid(V, p.W1, H2, p.W2, p.c1);
}

Matrix cond_h2(const Matrix& H1, const DbmParams& p) {
    return kernels::affine_sigmoid(H1, p.W2, p.c2, 1.0);
}

Matrix cond_v(const Matrix& H1, const DbmParams& p) {
    return kernels::affine_sigmoid_t(H1, p.W1, p.b, 1.0);
}

DbmParams pretrain(const Matrix& data, const NetworkShape& shape,
                   const TrainConfig& cfg1, const TrainConfig& cfg2) {
    shape.validate();
    require_shape(data.cols == shape.n, "pretrain: data vs shape");

    // RBM1 sees doubled upward input, compensating h1's missing top-down
    // drive; RBM2 symmetrically doubles the downward pass.
    const RbmParams rbm1 = train_rbm(data, shape.n, shape.m1, cfg1, 2.0, 1.0);

    Rng rep_rng = Rng(cfg2.seed).derive(0x5eed);
    const Matrix h1_probs = kernels::affine_sigmoid(data, rbm1.W, rbm1.c, 2.0);
    const Matrix h1_samples = kernels::bernoulli_sample(h1_probs, rep_rng);

    const RbmParams rbm2 = train_rbm(h1_samples, shape.m1, shape.m2, cfg2, 1.0, 2.0);

    DbmParams p;
    p.W1 = rbm1.W;
    p.W2 = rbm2.W;
    p.b = rbm1.b;
    p.c2 = rbm2.c;
    // h1's bias was learned twice, once per RBM; average the two views
    p.c1 = Vector(shape.m1);
    for (int j = 0; j < shape.m1; ++j) p.c1[j] = 0.5 * (rbm1.c[j] + rbm2.b[j]);
    return p;
}

MeanFieldState mean_field_positive(const Matrix& v_batch, const DbmParams& p, int iterations) {
    if (iterations < 1)
        throw std::invalid_argument("mean_field_positive: iterations must be >= 1");
    MeanFieldState mf;
    // init ignores input from h2
    mf.mu1 = kernels::affine_sigmoid(v_batch, p.W1, p.c1, 1.0);
    mf.mu2 = cond_h2(mf.mu1, p);
    for (int it = 0; it < iterations; ++it) {
        mf.mu1 = cond_h1(v_batch, mf.mu2, p);
        mf.mu2 = cond_h2(mf.mu1, p);
    }
    return mf;
}

FantasyParticles gibbs_negative(FantasyParticles particles, const DbmParams& p,
                                int steps, Rng& rng) {
    for (int step = 0; step < steps; ++step) {
        particles.h1 = kernels::bernoulli_sample(cond_h1(particles.v, particles.h2, p), rng);
        particles.h2 = kernels::bernoulli_sample(cond_h2(particles.h1, p), rng);
        particles.v = kernels::bernoulli_sample(cond_v(particles.h1, p), rng);
    }
    return particles;
}

FantasyParticles random_particles(const NetworkShape& shape, int count, Rng& rng) {
    FantasyParticles f;
    f.v = Matrix(count, shape.n);
    f.h1 = Matrix(count, shape.m1);
    f.h2 = Matrix(count, shape.m2);
    for (auto& x : f.v.data) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
    for (auto& x : f.h1.data) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
    for (auto& x : f.h2.data) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
    return f;
}

namespace {

bool all_finite(const DbmParams& p) {
    auto vec_ok = [](const Vector& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };
    for (double x : p.W1.data)
        if (!std::isfinite(x)) return false;
    for (double x : p.W2.data)
        if (!std::isfinite(x)) return false;
    return vec_ok(p.b) && vec_ok(p.c1) && vec_ok(p.c2);
}

struct DbmVelocity {
    Matrix W1, W2;
    Vector b, c1, c2;

    explicit DbmVelocity(const NetworkShape& s)
        : W1(s.n, s.m1), W2(s.m1, s.m2), b(s.n, 0.0), c1(s.m1, 0.0), c2(s.m2, 0.0) {}
};

void axpy_update(Matrix& param, Matrix& vel, const Matrix& pos, const Matrix& neg,
                 double lr, double momentum, double decay) {
    for (size_t i = 0; i < param.data.size(); ++i) {
        vel.data[i] = momentum * vel.data[i] + lr * (pos.data[i] - neg.data[i]) -
                      lr * decay * param.data[i];
        param.data[i] += vel.data[i];
    }
}

void axpy_update(Vector& param, Vector& vel, const Vector& pos, const Vector& neg,
                 double lr, double momentum) {
    for (size_t i = 0; i < param.size(); ++i) {
        vel[i] = momentum * vel[i] + lr * (pos[i] - neg[i]);
        param[i] += vel[i];
    }
}

} // namespace

FinetuneResult finetune(const Matrix& data, const DbmParams& p, const TrainConfig& cfg,
                        FantasyParticles particles, int mean_field_iterations) {
    cfg.validate();
    const auto s = p.shape();
    require_shape(data.rows > 0 && data.cols == s.n, "finetune: data vs params");
    require_shape(particles.v.rows > 0 && particles.v.cols == s.n &&
                      particles.h1.cols == s.m1 && particles.h2.cols == s.m2,
                  "finetune: particles vs params");

    Rng rng(cfg.seed);
    FinetuneResult result{p, std::move(particles)};
    DbmVelocity vel(s);

    const int batch = std::min(cfg.batch_size, data.rows);
    std::vector<int> order(data.rows);
    for (int i = 0; i < data.rows; ++i) order[i] = i;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (int start = 0; start < data.rows; start += batch) {
            const int rows = std::min(batch, data.rows - start);
            Matrix mb(rows, s.n);
            for (int r = 0; r < rows; ++r)
                std::copy_n(data.row(order[start + r]), s.n, mb.row(r));

            const MeanFieldState mf =
                mean_field_positive(mb, result.params, mean_field_iterations);
            result.particles =
                gibbs_negative(std::move(result.particles), result.params, cfg.cd_steps, rng);

            // negative statistics: binary chain states smoothed one
            // conditional deep (keeps the estimate unbiased, cuts variance)
            const Matrix neg_h1p = cond_h1(result.particles.v, result.particles.h2,
                                           result.params);
            const Matrix neg_h2p = cond_h2(result.particles.h1, result.params);
            const Matrix neg_vp = cond_v(result.particles.h1, result.params);

            const Matrix pos_W1 = kernels::outer_mean(mb, mf.mu1);
            const Matrix pos_W2 = kernels::outer_mean(mf.mu1, mf.mu2);
            const Matrix neg_W1 = kernels::outer_mean(result.particles.v, neg_h1p);
            const Matrix neg_W2 = kernels::outer_mean(result.particles.h1, neg_h2p);

            axpy_update(result.params.W1, vel.W1, pos_W1, neg_W1,
                        cfg.learning_rate, cfg.momentum, cfg.weight_decay);
            axpy_update(result.params.W2, vel.W2, pos_W2, neg_W2,
                        cfg.learning_rate, cfg.momentum, cfg.weight_decay);
            axpy_update(result.params.b, vel.b, kernels::column_mean(mb),
                        kernels::column_mean(neg_vp), cfg.learning_rate, cfg.momentum);
            axpy_update(result.params.c1, vel.c1, kernels::column_mean(mf.mu1),
                        kernels::column_mean(neg_h1p), cfg.learning_rate, cfg.momentum);
            axpy_update(result.params.c2, vel.c2, kernels::column_mean(mf.mu2),
                        kernels::column_mean(neg_h2p), cfg.learning_rate, cfg.momentum);

            if (!all_finite(result.params))
                throw TrainingDivergence("dbm: parameters went non-finite");
        }
    }
    return result;
}

Matrix sample_population(const DbmParams& p, const Matrix& init, int iterations, Rng& rng) {
    const auto s = p.shape();
    require_shape(init.cols == s.n, "sample_population: init vs params");
    if (iterations == 0) return init;

    FantasyParticles particles;
    particles.v = init;
    particles.h1 = kernels::bernoulli_sample(
        kernels::affine_sigmoid(particles.v, p.W1, p.c1, 1.0), rng);
    particles.h2 = kernels::bernoulli_sample(cond_h2(particles.h1, p), rng);
    particles = gibbs_negative(std::move(particles), p, iterations, rng);
    return particles.v;
}

} // namespace deep_eda
