#pragma once

#include "deep_eda/matrix.hpp"
#include "deep_eda/rng.hpp"

namespace deep_eda::kernels {

// Dense batch kernels used by the Boltzmann-machine layers. Each kernel
// exists twice: a plain serial reference (namespace serial) and an
// OpenMP-parallel version (namespace omp). Both compute every output
// element with the same summation order, so their results are bit-identical
// and the dispatching wrappers below can pick either freely. The serial
// versions stay around as the test reference and for the benchmark target.

namespace serial {

// sigm(scale * X.W + bias), X: B x n, W: n x m -> B x m
Matrix affine_sigmoid(const Matrix& X, const Matrix& W, const Vector& bias, double scale);

// sigm(scale * H.W^T + bias), H: B x m, W: n x m -> B x n
Matrix affine_sigmoid_t(const Matrix& H, const Matrix& W, const Vector& bias, double scale);

// sigm(V.W1 + H2.W2^T + bias), V: B x n, W1: n x m1, H2: B x m2, W2: m1 x m2 -> B x m1
Matrix two_layer_sigmoid(const Matrix& V, const Matrix& W1, const Matrix& H2,
                         const Matrix& W2, const Vector& bias);

// X^T.Y / X.rows, X: B x n, Y: B x m -> n x m (per-example mean of outer products)
Matrix outer_mean(const Matrix& X, const Matrix& Y);

Vector column_mean(const Matrix& X);

} // namespace serial

namespace omp {

Matrix affine_sigmoid(const Matrix& X, const Matrix& W, const Vector& bias, double scale);
Matrix affine_sigmoid_t(const Matrix& H, const Matrix& W, const Vector& bias, double scale);
Matrix two_layer_sigmoid(const Matrix& V, const Matrix& W1, const Matrix& H2,
                         const Matrix& W2, const Vector& bias);
Matrix outer_mean(const Matrix& X, const Matrix& Y);
Vector column_mean(const Matrix& X);

} // namespace omp

// Dispatching entry points: OpenMP above a work threshold, serial below it.
Matrix affine_sigmoid(const Matrix& X, const Matrix& W, const Vector& bias, double scale = 1.0);
Matrix affine_sigmoid_t(const Matrix& H, const Matrix& W, const Vector& bias, double scale = 1.0);
Matrix two_layer_sigmoid(const Matrix& V, const Matrix& W1, const Matrix& H2,
                         const Matrix& W2, const Vector& bias);
Matrix outer_mean(const Matrix& X, const Matrix& Y);
Vector column_mean(const Matrix& X);

// Elementwise Bernoulli draw against `probs`, row-major draw order. Stays
// serial: the RNG stream is a sequential contract.
Matrix bernoulli_sample(const Matrix& probs, Rng& rng);

double sigmoid(double x);

} // namespace deep_eda::kernels
