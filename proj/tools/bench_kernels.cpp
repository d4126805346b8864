// Times the serial reference kernels against the OpenMP versions on shapes
// typical for the optimizer (batch = selected parents, n = genome length,
// m = hidden layer width).

#include <chrono>
#include <cstdio>
#include <vector>

#include "deep_eda/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace deep_eda;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng) {
    Matrix m(rows, cols);
    for (auto& x : m.data) x = rng.uniform01();
    return m;
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

volatile double sink;

void bench_shape(int batch, int n, int m, int iters) {
    Rng rng(42);
    const Matrix X = random_matrix(batch, n, rng);
    const Matrix W = random_matrix(n, m, rng);
    const Matrix H = random_matrix(batch, m, rng);
    const Vector bias(m, 0.1);
    const Vector vbias(n, 0.1);

    const double t_serial = time_best_of(3, [&] {
        for (int i = 0; i < iters; ++i) {
            sink = kernels::serial::affine_sigmoid(X, W, bias, 1.0)(0, 0);
            sink = kernels::serial::affine_sigmoid_t(H, W, vbias, 1.0)(0, 0);
            sink = kernels::serial::outer_mean(X, H)(0, 0);
        }
    });
    const double t_omp = time_best_of(3, [&] {
        for (int i = 0; i < iters; ++i) {
            sink = kernels::omp::affine_sigmoid(X, W, bias, 1.0)(0, 0);
            sink = kernels::omp::affine_sigmoid_t(H, W, vbias, 1.0)(0, 0);
            sink = kernels::omp::outer_mean(X, H)(0, 0);
        }
    });

    std::printf("%6d x %4d x %4d   serial %8.3f ms   omp %8.3f ms   speedup %5.2fx\n",
                batch, n, m, t_serial * 1e3, t_omp * 1e3, t_serial / t_omp);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled in this build\n");
#endif
    std::printf("%6s x %4s x %4s\n", "batch", "n", "m");
    bench_shape(50, 50, 50, 200);
    bench_shape(500, 25, 25, 200);
    bench_shape(1000, 50, 50, 50);
    bench_shape(2000, 100, 100, 10);
    bench_shape(4000, 150, 150, 5);
    return 0;
}
