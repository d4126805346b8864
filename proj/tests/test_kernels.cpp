#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "deep_eda/kernels.hpp"

using namespace deep_eda;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (auto& x : m.data) x = lo + (hi - lo) * rng.uniform01();
    return m;
}

Vector random_vector(int len, Rng& rng) {
    Vector v(len);
    for (auto& x : v) x = 2.0 * rng.uniform01() - 1.0;
    return v;
}

// textbook triple loop, no tricks; checks both variants at once
Matrix naive_affine_sigmoid(const Matrix& X, const Matrix& W, const Vector& bias,
                            double scale) {
    Matrix out(X.rows, W.cols);
    for (int r = 0; r < X.rows; ++r)
        for (int j = 0; j < W.cols; ++j) {
            double acc = bias[j];
            for (int i = 0; i < X.cols; ++i) acc += X(r, i) * W(i, j);
            out(r, j) = 1.0 / (1.0 + std::exp(-scale * acc));
        }
    return out;
}

} // namespace

TEST_CASE("sigmoid reference points") {
    CHECK(kernels::sigmoid(0.0) == doctest::Approx(0.5));
    CHECK(kernels::sigmoid(2.0) == doctest::Approx(0.880797).epsilon(1e-5));
    CHECK(kernels::sigmoid(-2.0) == doctest::Approx(0.119203).epsilon(1e-5));
}

TEST_CASE("serial and omp kernels are bit-identical across shapes") {
    Rng rng(7);
    // shapes straddling the dispatch threshold
    const int shapes[][3] = {{1, 1, 1}, {3, 5, 2}, {17, 9, 13}, {64, 40, 32}, {300, 60, 45}};
    for (const auto& s : shapes) {
        const int B = s[0], n = s[1], m = s[2];
        const Matrix X = random_matrix(B, n, rng, 0.0, 1.0);
        const Matrix W = random_matrix(n, m, rng);
        const Matrix H = random_matrix(B, m, rng, 0.0, 1.0);
        const Matrix W2 = random_matrix(m, 4, rng);
        const Matrix H2 = random_matrix(B, 4, rng, 0.0, 1.0);
        const Vector bm = random_vector(m, rng);
        const Vector bn = random_vector(n, rng);

        CHECK(kernels::serial::affine_sigmoid(X, W, bm, 2.0) ==
              kernels::omp::affine_sigmoid(X, W, bm, 2.0));
        CHECK(kernels::serial::affine_sigmoid_t(H, W, bn, 1.0) ==
              kernels::omp::affine_sigmoid_t(H, W, bn, 1.0));
        CHECK(kernels::serial::two_layer_sigmoid(X, W, H2, W2, bm) ==
              kernels::omp::two_layer_sigmoid(X, W, H2, W2, bm));
        CHECK(kernels::serial::outer_mean(X, H) == kernels::omp::outer_mean(X, H));
        CHECK(kernels::serial::column_mean(X) == kernels::omp::column_mean(X));

        // the dispatching wrappers must agree with the reference too
        CHECK(kernels::affine_sigmoid(X, W, bm, 2.0) ==
              kernels::serial::affine_sigmoid(X, W, bm, 2.0));
        CHECK(kernels::outer_mean(X, H) == kernels::serial::outer_mean(X, H));
    }
}

TEST_CASE("affine kernels match a naive triple loop") {
    Rng rng(11);
    const Matrix X = random_matrix(13, 9, rng, 0.0, 1.0);
    const Matrix W = random_matrix(9, 7, rng);
    const Vector bias = random_vector(7, rng);

    const Matrix got = kernels::affine_sigmoid(X, W, bias, 1.5);
    const Matrix want = naive_affine_sigmoid(X, W, bias, 1.5);
    REQUIRE(got.same_shape(want));
    for (size_t i = 0; i < got.data.size(); ++i)
        CHECK(got.data[i] == doctest::Approx(want.data[i]).epsilon(1e-12));
}

TEST_CASE("transposed kernel is the transpose-weights forward pass") {
    Rng rng(3);
    const Matrix W = random_matrix(5, 4, rng);
    Matrix Wt(4, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) Wt(j, i) = W(i, j);
    const Matrix H = random_matrix(6, 4, rng, 0.0, 1.0);
    const Vector bias = random_vector(5, rng);

    const Matrix a = kernels::affine_sigmoid_t(H, W, bias, 1.0);
    const Matrix b = kernels::affine_sigmoid(H, Wt, bias, 1.0);
    REQUIRE(a.same_shape(b));
    for (size_t i = 0; i < a.data.size(); ++i)
        CHECK(a.data[i] == doctest::Approx(b.data[i]).epsilon(1e-12));
}

TEST_CASE("two_layer_sigmoid folds both inputs") {
    // 1x1x1 chain: sigm(v*w1 + h2*w2 + c)
    Matrix V(1, 1, 1.0), H2(1, 1, 1.0), W1(1, 1, 1.0), W2(1, 1, 1.0);
    const Matrix out = kernels::two_layer_sigmoid(V, W1, H2, W2, Vector{0.0});
    CHECK(out(0, 0) == doctest::Approx(kernels::sigmoid(2.0)));
}

TEST_CASE("shape mismatches throw") {
    Matrix X(2, 3), W(4, 2);
    CHECK_THROWS_AS(kernels::affine_sigmoid(X, W, Vector(2, 0.0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(kernels::outer_mean(Matrix(2, 3), Matrix(3, 3)), std::invalid_argument);
    CHECK_THROWS_AS(kernels::column_mean(Matrix()), std::invalid_argument);
}

TEST_CASE("bernoulli_sample is deterministic per seed and unbiased") {
    const Matrix probs(100, 20, 0.3);
    Rng a(5), b(5);
    const Matrix sa = kernels::bernoulli_sample(probs, a);
    const Matrix sb = kernels::bernoulli_sample(probs, b);
    CHECK(sa == sb);

    double mean = 0.0;
    for (double x : sa.data) mean += x;
    mean /= static_cast<double>(sa.data.size());
    CHECK(mean == doctest::Approx(0.3).epsilon(0.15));
    for (double x : sa.data) CHECK((x == 0.0 || x == 1.0));
}
