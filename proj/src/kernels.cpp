#include "deep_eda/kernels.hpp"

#include <cmath>

namespace deep_eda::kernels {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace {

void check_affine(const Matrix& X, const Matrix& W, const Vector& bias) {
    require_shape(X.cols == W.rows, "affine_sigmoid: X.cols != W.rows");
    require_shape(static_cast<int>(bias.size()) == W.cols, "affine_sigmoid: bias size != W.cols");
}

void check_affine_t(const Matrix& H, const Matrix& W, const Vector& bias) {
    require_shape(H.cols == W.cols, "affine_sigmoid_t: H.cols != W.cols");
    require_shape(static_cast<int>(bias.size()) == W.rows, "affine_sigmoid_t: bias size != W.rows");
}

void check_two_layer(const Matrix& V, const Matrix& W1, const Matrix& H2,
                     const Matrix& W2, const Vector& bias) {
    require_shape(V.cols == W1.rows, "two_layer_sigmoid: V.cols != W1.rows");
    require_shape(H2.cols == W2.cols, "two_layer_sigmoid: H2.cols != W2.cols");
    require_shape(W1.cols == W2.rows, "two_layer_sigmoid: W1.cols != W2.rows");
    require_shape(V.rows == H2.rows, "two_layer_sigmoid: batch sizes differ");
    require_shape(static_cast<int>(bias.size()) == W1.cols, "two_layer_sigmoid: bias size != W1.cols");
}

// One output row of sigm(scale * x.W + bias). Shared by the serial and OpenMP
// variants so per-element arithmetic is identical in both.
inline void affine_sigmoid_row(const double* x, const Matrix& W, const Vector& bias,
                               double scale, double* out) {
    const int n = W.rows, m = W.cols;
    for (int j = 0; j < m; ++j) out[j] = bias[j];
    for (int i = 0; i < n; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* wrow = W.row(i);
        for (int j = 0; j < m; ++j) out[j] += xi * wrow[j];
    }
    for (int j = 0; j < m; ++j) out[j] = sigmoid(scale * out[j]);
}

inline void affine_sigmoid_t_row(const double* h, const Matrix& W, const Vector& bias,
                                 double scale, double* out) {
    const int n = W.rows, m = W.cols;
    for (int i = 0; i < n; ++i) {
        const double* wrow = W.row(i);
        double acc = 0.0;
        for (int j = 0; j < m; ++j) acc += h[j] * wrow[j];
        out[i] = sigmoid(scale * acc + bias[i]);
    }
}

inline void two_layer_sigmoid_row(const double* v, const Matrix& W1, const double* h2,
                                  const Matrix& W2, const Vector& bias, double* out) {
    const int n = W1.rows, m1 = W1.cols, m2 = W2.cols;
    for (int j = 0; j < m1; ++j) out[j] = bias[j];
    for (int i = 0; i < n; ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        const double* wrow = W1.row(i);
        for (int j = 0; j < m1; ++j) out[j] += vi * wrow[j];
    }
    for (int j = 0; j < m1; ++j) {
        const double* wrow = W2.row(j);
        double acc = 0.0;
        for (int k = 0; k < m2; ++k) acc += h2[k] * wrow[k];
        out[j] = sigmoid(out[j] + acc);
    }
}

// Row i of X^T.Y / B: sums run over the batch in index order in both variants.
inline void outer_mean_row(const Matrix& X, const Matrix& Y, int i, double* out) {
    const int m = Y.cols;
    const double inv = 1.0 / X.rows;
    for (int j = 0; j < m; ++j) out[j] = 0.0;
    for (int r = 0; r < X.rows; ++r) {
        const double xi = X(r, i);
        if (xi == 0.0) continue;
        const double* yrow = Y.row(r);
        for (int j = 0; j < m; ++j) out[j] += xi * yrow[j];
    }
    for (int j = 0; j < m; ++j) out[j] *= inv;
}

inline double column_mean_col(const Matrix& X, int c) {
    double acc = 0.0;
    for (int r = 0; r < X.rows; ++r) acc += X(r, c);
    return acc / X.rows;
}

} // namespace

namespace serial {

Matrix affine_sigmoid(const Matrix& X, const Matrix& W, const Vector& bias, double scale) {
    check_affine(X, W, bias);
    Matrix out(X.rows, W.cols);
    for (int r = 0; r < X.rows; ++r)
        affine_sigmoid_row(X.row(r), W, bias, scale, out.row(r));
    return out;
}

Matrix affine_sigmoid_t(const Matrix& H, const Matrix& W, const Vector& bias, double scale) {
    check_affine_t(H, W, bias);
    Matrix out(H.rows, W.rows);
    for (int r = 0; r < H.rows; ++r)
        affine_sigmoid_t_row(H.row(r), W, bias, scale, out.row(r));
    return out;
}

Matrix two_layer_sigmoid(const Matrix& V, const Matrix& W1, const Matrix& H2,
                         const Matrix& W2, const Vector& bias) {
    check_two_layer(V, W1, H2, W2, bias);
    Matrix out(V.rows, W1.cols);
    for (int r = 0; r < V.rows; ++r)
        two_layer_sigmoid_row(V.row(r), W1, H2.row(r), W2, bias, out.row(r));
    return out;
}

Matrix outer_mean(const Matrix& X, const Matrix& Y) {
    require_shape(X.rows == Y.rows && X.rows > 0, "outer_mean: batch sizes differ or empty");
    Matrix out(X.cols, Y.cols);
    for (int i = 0; i < X.cols; ++i) outer_mean_row(X, Y, i, out.row(i));
    return out;
}

Vector column_mean(const Matrix& X) {
    require_shape(X.rows > 0, "column_mean: empty batch");
    Vector out(X.cols);
    for (int c = 0; c < X.cols; ++c) out[c] = column_mean_col(X, c);
    return out;
}

} // namespace serial

namespace omp {

Matrix affine_sigmoid(const Matrix& X, const Matrix& W, const Vector& bias, double scale) {
    check_affine(X, W, bias);
    Matrix out(X.rows, W.cols);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < X.rows; ++r)
        affine_sigmoid_row(X.row(r), W, bias, scale, out.row(r));
    return out;
}

Matrix affine_sigmoid_t(const Matrix& H, const Matrix& W, const Vector& bias, double scale) {
    check_affine_t(H, W, bias);
    Matrix out(H.rows, W.rows);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < H.rows; ++r)
        affine_sigmoid_t_row(H.row(r), W, bias, scale, out.row(r));
    return out;
}

Matrix two_layer_sigmoid(const Matrix& V, const Matrix& W1, const Matrix& H2,
                         const Matrix& W2, const Vector& bias) {
    check_two_layer(V, W1, H2, W2, bias);
    Matrix out(V.rows, W1.cols);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < V.rows; ++r)
        two_layer_sigmoid_row(V.row(r), W1, H2.row(r), W2, bias, out.row(r));
    return out;
}

Matrix outer_mean(const Matrix& X, const Matrix& Y) {
    require_shape(X.rows == Y.rows && X.rows > 0, "outer_mean: batch sizes differ or empty");
    Matrix out(X.cols, Y.cols);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < X.cols; ++i) outer_mean_row(X, Y, i, out.row(i));
    return out;
}

Vector column_mean(const Matrix& X) {
    require_shape(X.rows > 0, "column_mean: empty batch");
    Vector out(X.cols);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < X.cols; ++c) out[c] = column_mean_col(X, c);
    return out;
}

} // namespace omp

namespace {
// Below this many multiply-adds the parallel-for overhead dominates.
constexpr long kOmpWorkThreshold = 1 << 15;
} // namespace

Matrix affine_sigmoid(const Matrix& X, const Matrix& W, const Vector& bias, double scale) {
    const long work = static_cast<long>(X.rows) * W.rows * W.cols;
    return work >= kOmpWorkThreshold ? omp::affine_sigmoid(X, W, bias, scale)
                                     : serial::affine_sigmoid(X, W, bias, scale);
}

Matrix affine_sigmoid_t(const Matrix& H, const Matrix& W, const Vector& bias, double scale) {
    const long work = static_cast<long>(H.rows) * W.rows * W.cols;
    return work >= kOmpWorkThreshold ? omp::affine_sigmoid_t(H, W, bias, scale)
                                     : serial::affine_sigmoid_t(H, W, bias, scale);
}

Matrix two_layer_sigmoid(const Matrix& V, const Matrix& W1, const Matrix& H2,
                         const Matrix& W2, const Vector& bias) {
    const long work = static_cast<long>(V.rows) * (static_cast<long>(W1.rows) * W1.cols +
                                                   static_cast<long>(W2.rows) * W2.cols);
    return work >= kOmpWorkThreshold ? omp::two_layer_sigmoid(V, W1, H2, W2, bias)
                                     : serial::two_layer_sigmoid(V, W1, H2, W2, bias);
}

Matrix outer_mean(const Matrix& X, const Matrix& Y) {
    const long work = static_cast<long>(X.rows) * X.cols * Y.cols;
    return work >= kOmpWorkThreshold ? omp::outer_mean(X, Y) : serial::outer_mean(X, Y);
}

Vector column_mean(const Matrix& X) {
    const long work = static_cast<long>(X.rows) * X.cols;
    return work >= kOmpWorkThreshold ? omp::column_mean(X) : serial::column_mean(X);
}

Matrix bernoulli_sample(const Matrix& probs, Rng& rng) {
    Matrix out(probs.rows, probs.cols);
    for (size_t i = 0; i < probs.data.size(); ++i)
        out.data[i] = rng.uniform01() < probs.data[i] ? 1.0 : 0.0;
    return out;
}

} // namespace deep_eda::kernels
