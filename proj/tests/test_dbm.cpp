#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <map>

#include "deep_eda/dbm.hpp"
#include "oracles.hpp"

using namespace deep_eda;

namespace {

DbmParams zero_dbm(int n, int m1, int m2) {
    DbmParams p;
    p.W1 = Matrix(n, m1);
    p.W2 = Matrix(m1, m2);
    p.b = Vector(n, 0.0);
    p.c1 = Vector(m1, 0.0);
    p.c2 = Vector(m2, 0.0);
    return p;
}

DbmParams random_dbm(int n, int m1, int m2, Rng& rng, double scale = 1.0) {
    DbmParams p = zero_dbm(n, m1, m2);
    for (auto& w : p.W1.data) w = scale * (2.0 * rng.uniform01() - 1.0);
    for (auto& w : p.W2.data) w = scale * (2.0 * rng.uniform01() - 1.0);
    for (auto& b : p.b) b = scale * (2.0 * rng.uniform01() - 1.0);
    for (auto& c : p.c1) c = scale * (2.0 * rng.uniform01() - 1.0);
    for (auto& c : p.c2) c = scale * (2.0 * rng.uniform01() - 1.0);
    return p;
}

bool params_equal(const DbmParams& a, const DbmParams& b) {
    return a.W1 == b.W1 && a.W2 == b.W2 && a.b == b.b && a.c1 == b.c1 && a.c2 == b.c2;
}

Matrix binary_batch(int rows, int cols, Rng& rng, double p1 = 0.5) {
    Matrix m(rows, cols);
    for (auto& x : m.data) x = rng.bernoulli(p1) ? 1.0 : 0.0;
    return m;
}

} // namespace

TEST_CASE("energy: hand values and bilinearity") {
    Rng rng(2);
    DbmParams p = random_dbm(3, 2, 2, rng);
    CHECK(energy(Vector(3, 0.0), Vector(2, 0.0), Vector(2, 0.0), p) == 0.0);

    DbmParams unit = zero_dbm(2, 1, 1);
    unit.W1(0, 0) = 1.0;
    unit.W1(1, 0) = 1.0;
    unit.W2(0, 0) = 1.0;
    CHECK(energy(Vector(2, 1.0), Vector(1, 1.0), Vector(1, 1.0), unit) == -3.0);

    const DbmParams zeros = zero_dbm(3, 2, 2);
    CHECK(energy(Vector{1, 0, 1}, Vector{1, 1}, Vector{0, 1}, zeros) == 0.0);

    // scaling every parameter by s scales every energy by s
    const double s = 2.75;
    DbmParams scaled = p;
    for (auto& w : scaled.W1.data) w *= s;
    for (auto& w : scaled.W2.data) w *= s;
    for (auto& b : scaled.b) b *= s;
    for (auto& c : scaled.c1) c *= s;
    for (auto& c : scaled.c2) c *= s;
    for (int trial = 0; trial < 20; ++trial) {
        Vector v(3), h1(2), h2(2);
        for (auto& x : v) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
        for (auto& x : h1) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
        for (auto& x : h2) x = rng.bernoulli(0.5) ? 1.0 : 0.0;
        CHECK(energy(v, h1, h2, scaled) ==
              doctest::Approx(s * energy(v, h1, h2, p)).epsilon(1e-12));
    }
}

TEST_CASE("exact_visible_probability: uniform case, normalization, cross-check") {
    const DbmParams zero = zero_dbm(3, 2, 2);
    oracles::for_each_genome(3, [&](const Genome& g) {
        Vector v(g.begin(), g.end());
        CHECK(exact_visible_probability(v, zero) == doctest::Approx(0.125).epsilon(1e-12));
    });

    Rng rng(6);
    const DbmParams p = random_dbm(3, 3, 2, rng);
    double total = 0.0;
    oracles::for_each_genome(3, [&](const Genome& g) {
        Vector v(g.begin(), g.end());
        const double prob = exact_visible_probability(v, p);
        // independent summation order (plain domain, h2-major)
        CHECK(prob == doctest::Approx(oracles::dbm_visible_probability(v, p)).epsilon(1e-9));
        total += prob;
    });
    CHECK(std::fabs(total - 1.0) < 1e-9);

    // spec example model: n=2, m1=m2=1, unit weights, zero biases
    DbmParams unit = zero_dbm(2, 1, 1);
    unit.W1(0, 0) = 1.0;
    unit.W1(1, 0) = 1.0;
    unit.W2(0, 0) = 1.0;
    const Vector v11{1.0, 1.0};
    CHECK(exact_visible_probability(v11, unit) ==
          doctest::Approx(oracles::dbm_visible_probability(v11, unit)).epsilon(1e-12));

    const DbmParams big = zero_dbm(10, 8, 8);
    CHECK_THROWS_AS(exact_visible_probability(Vector(10, 0.0), big), std::invalid_argument);
}

TEST_CASE("conditionals: zero params, rbm reduction, hand value") {
    const DbmParams zero = zero_dbm(4, 3, 2);
    Rng rng(9);
    const Matrix V = binary_batch(5, 4, rng);
    const Matrix H1 = binary_batch(5, 3, rng);
    const Matrix H2 = binary_batch(5, 2, rng);
    for (double x : cond_h1(V, H2, zero).data) CHECK(x == 0.5);
    for (double x : cond_h2(H1, zero).data) CHECK(x == 0.5);
    for (double x : cond_v(H1, zero).data) CHECK(x == 0.5);

    // with no second layer input the DBM reduces to the RBM forward pass
    DbmParams p = random_dbm(4, 3, 2, rng);
    p.c1 = Vector(3, 0.0);
    RbmParams rbm;
    rbm.W = p.W1;
    rbm.b = p.b;
    rbm.c = Vector(3, 0.0);
    const Matrix h2_zero(5, 2, 0.0);
    CHECK(cond_h1(V, h2_zero, p) == hidden_probs(V, rbm));

    DbmParams unit = zero_dbm(1, 1, 1);
    unit.W1(0, 0) = 1.0;
    unit.W2(0, 0) = 1.0;
    const Matrix one(1, 1, 1.0);
    CHECK(cond_h1(one, one, unit)(0, 0) == doctest::Approx(0.880797).epsilon(1e-5));
}

TEST_CASE("pretrain: zero-epoch init, determinism, learning signal") {
    const int n = 6;
    Matrix data(8, n, 0.0);
    for (int r = 4; r < 8; ++r)
        for (int c = 0; c < n; ++c) data(r, c) = 1.0;
    const NetworkShape shape{n, 4, 2};

    TrainConfig zero_cfg;
    zero_cfg.epochs = 0;
    zero_cfg.seed = 11;
    const DbmParams init = pretrain(data, shape, zero_cfg, zero_cfg);
    for (double w : init.W1.data) CHECK(std::fabs(w) < 0.1);
    for (double w : init.W2.data) CHECK(std::fabs(w) < 0.1);

    TrainConfig cfg;
    cfg.epochs = 40;
    cfg.seed = 11;
    const DbmParams a = pretrain(data, shape, cfg, cfg);
    const DbmParams b = pretrain(data, shape, cfg, cfg);
    CHECK(params_equal(a, b));

    const Vector zeros(n, 0.0), ones(n, 1.0);
    CHECK(exact_visible_probability(zeros, a) > exact_visible_probability(zeros, init));
    CHECK(exact_visible_probability(ones, a) > exact_visible_probability(ones, init));
}

TEST_CASE("mean field: fixed points and decoupling") {
    const DbmParams zero = zero_dbm(4, 3, 2);
    Rng rng(14);
    const Matrix V = binary_batch(3, 4, rng);
    for (int iters : {1, 5, 50}) {
        const MeanFieldState mf = mean_field_positive(V, zero, iters);
        for (double x : mf.mu1.data) CHECK(x == 0.5);
        for (double x : mf.mu2.data) CHECK(x == 0.5);
    }

    // weights bounded by 1: the iteration contracts to a fixed point
    const DbmParams p = random_dbm(4, 3, 2, rng, 1.0);
    const MeanFieldState a = mean_field_positive(V, p, 100);
    const MeanFieldState b = mean_field_positive(V, p, 101);
    for (size_t i = 0; i < a.mu1.data.size(); ++i)
        CHECK(std::fabs(a.mu1.data[i] - b.mu1.data[i]) < 1e-10);
    for (size_t i = 0; i < a.mu2.data.size(); ++i)
        CHECK(std::fabs(a.mu2.data[i] - b.mu2.data[i]) < 1e-10);

    // W2 = 0 decouples the layers: mu1 is the plain conditional at any depth
    DbmParams dec = p;
    dec.W2 = Matrix(3, 2, 0.0);
    const Matrix expect = cond_h1(V, Matrix(3, 2, 0.0), dec);
    for (int iters : {1, 3, 17}) {
        const MeanFieldState mf = mean_field_positive(V, dec, iters);
        CHECK(mf.mu1 == expect);
    }

    CHECK_THROWS_AS(mean_field_positive(V, p, 0), std::invalid_argument);
}

TEST_CASE("gibbs_negative: determinism and uniform stationary distribution") {
    const DbmParams zero = zero_dbm(3, 2, 2);
    Rng init_rng(5);
    FantasyParticles particles = random_particles(zero.shape(), 4, init_rng);

    Rng a(31), b(31);
    const FantasyParticles ra = gibbs_negative(particles, zero, 10, a);
    const FantasyParticles rb = gibbs_negative(particles, zero, 10, b);
    CHECK(ra.v == rb.v);
    CHECK(ra.h1 == rb.h1);
    CHECK(ra.h2 == rb.h2);

    // zero parameters: long-run unit means sit at one half
    Rng c(77);
    FantasyParticles chain = random_particles(zero.shape(), 1, c);
    double mean = 0.0;
    const int steps = 10000;
    for (int s = 0; s < steps; ++s) {
        chain = gibbs_negative(std::move(chain), zero, 1, c);
        for (double x : chain.v.data) mean += x;
    }
    mean /= static_cast<double>(steps) * 3;
    CHECK(mean > 0.48);
    CHECK(mean < 0.52);
}

TEST_CASE("gibbs chain visits visible states per the exact distribution") {
    // light version of the acceptance check: one small model, shorter chain
    Rng rng(123);
    const DbmParams p = random_dbm(4, 2, 2, rng, 0.7);

    Rng chain_rng(9);
    FantasyParticles chain = random_particles(p.shape(), 1, chain_rng);
    chain = gibbs_negative(std::move(chain), p, 1000, chain_rng);  // burn-in

    std::map<int, long> counts;
    const int steps = 50000;
    for (int s = 0; s < steps; ++s) {
        chain = gibbs_negative(std::move(chain), p, 1, chain_rng);
        int code = 0;
        for (int i = 0; i < 4; ++i) code |= (chain.v(0, i) != 0.0 ? 1 : 0) << i;
        ++counts[code];
    }

    double tv = 0.0;
    oracles::for_each_genome(4, [&](const Genome& g) {
        int code = 0;
        for (int i = 0; i < 4; ++i) code |= g[i] << i;
        const Vector v(g.begin(), g.end());
        const double expect = exact_visible_probability(v, p);
        const double got = static_cast<double>(counts[code]) / steps;
        tv += std::fabs(expect - got);
    });
    CHECK(tv / 2.0 < 0.05);
}

TEST_CASE("finetune: zero rate leaves params, advances particles; deterministic") {
    Rng rng(3);
    const DbmParams p = random_dbm(5, 3, 2, rng, 0.5);
    Matrix data = binary_batch(8, 5, rng);

    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    cfg.epochs = 2;
    cfg.batch_size = 4;
    cfg.cd_steps = 3;
    cfg.seed = 10;
    FantasyParticles particles = random_particles(p.shape(), 4, rng);
    const Matrix v_before = particles.v;

    const FinetuneResult r = finetune(data, p, cfg, particles, 5);
    CHECK(params_equal(r.params, p));
    CHECK_FALSE(r.particles.v == v_before);

    cfg.learning_rate = 0.05;
    const FinetuneResult r1 = finetune(data, p, cfg, particles, 5);
    const FinetuneResult r2 = finetune(data, p, cfg, particles, 5);
    CHECK(params_equal(r1.params, r2.params));
    CHECK_FALSE(params_equal(r1.params, p));
}

TEST_CASE("finetune climbs the exact data log-likelihood on the tiny fixture") {
    const int n = 4, m1 = 3, m2 = 2;
    Matrix data(16, n, 0.0);
    for (int r = 8; r < 16; ++r)
        for (int c = 0; c < n; ++c) data(r, c) = 1.0;

    TrainConfig pre_cfg;
    pre_cfg.epochs = 20;
    pre_cfg.batch_size = 16;
    pre_cfg.seed = 21;
    DbmParams p = pretrain(data, {n, m1, m2}, pre_cfg, pre_cfg);

    TrainConfig cfg;
    cfg.learning_rate = 0.005;
    cfg.epochs = 1;
    cfg.batch_size = 16;  // full batch
    cfg.cd_steps = 5;
    cfg.momentum = 0.0;
    cfg.final_momentum = 0.0;
    cfg.seed = 77;

    Rng prng(31);
    FantasyParticles particles = random_particles(p.shape(), 16, prng);

    const double ll_start = exact_data_log_likelihood(data, p);
    double ll_prev = ll_start;
    int decreases = 0;
    const int updates = 200;
    for (int u = 0; u < updates; ++u) {
        cfg.seed = 1000 + u;
        FinetuneResult r = finetune(data, p, cfg, std::move(particles), 10);
        p = std::move(r.params);
        particles = std::move(r.particles);
        const double ll = exact_data_log_likelihood(data, p);
        if (ll < ll_prev) ++decreases;
        ll_prev = ll;
    }
    CHECK(ll_prev > ll_start);
    CHECK(decreases <= updates / 20);  // <= 5% non-monotone steps
}

TEST_CASE("sample_population: degenerate cases") {
    Rng rng(41);
    const DbmParams zero = zero_dbm(4, 3, 2);
    const Matrix init = binary_batch(6, 4, rng);

    CHECK(sample_population(zero, init, 0, rng) == init);

    // zero params: sampled bits are fair coin flips
    Rng srng(8);
    double mean = 0.0;
    long count = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const Matrix out = sample_population(zero, init, 2, srng);
        for (double x : out.data) {
            mean += x;
            ++count;
        }
    }
    mean /= static_cast<double>(count);
    CHECK(mean > 0.45);
    CHECK(mean < 0.55);
}

TEST_CASE("sampling recovers the modes of a two-point training set") {
    const int n = 8;
    Matrix data(16, n, 0.0);
    for (int r = 8; r < 16; ++r)
        for (int c = 0; c < n; ++c) data(r, c) = 1.0;

    TrainConfig pre_cfg;
    pre_cfg.epochs = 50;
    pre_cfg.batch_size = 16;
    pre_cfg.seed = 2;
    DbmParams p = pretrain(data, {n, n, n / 2}, pre_cfg, pre_cfg);

    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.epochs = 30;
    cfg.batch_size = 16;
    cfg.cd_steps = 5;
    cfg.seed = 3;
    Rng prng(4);
    FinetuneResult r = finetune(data, p, cfg, random_particles(p.shape(), 16, prng), 10);

    Rng srng(5);
    int hits = 0;
    const int samples = 1000;
    for (int batch = 0; batch < samples / 16; ++batch) {
        const Matrix out = sample_population(r.params, data, 25, srng);
        for (int row = 0; row < out.rows; ++row) {
            int ones = 0;
            for (int c = 0; c < n; ++c) ones += out(row, c) != 0.0 ? 1 : 0;
            if (ones == 0 || ones == n) ++hits;
        }
    }
    CHECK(hits >= samples * 60 / 100);
}

TEST_CASE("dbm snapshot round-trips through its text format") {
    Rng rng(55);
    const DbmParams p = random_dbm(4, 3, 2, rng);
    const std::string path = "/tmp/deep_eda_test_dbm_params.txt";
    save_dbm_params(p, path);
    const DbmParams back = load_dbm_params(path);
    CHECK(params_equal(back, p));
    std::remove(path.c_str());
}
