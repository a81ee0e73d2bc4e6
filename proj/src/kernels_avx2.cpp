// AVX2+FMA kernel variants.  Compiled with -mavx2 -mfma; only reached
// after a runtime CPU check, see kernels.cpp.

#include "dga/kernels.hpp"

#include <immintrin.h>

namespace dga::kernels {
namespace {

inline double hsum(__m256d v) {
    // fixed reduction order: (v0+v1) + (v2+v3)
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d pair = _mm_add_pd(lo, hi);          // [v0+v2, v1+v3]
    __m128d swapped = _mm_unpackhi_pd(pair, pair);
    return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_avx2(const double* a, const double* x, double* y,
                 std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        y[r] = dot_avx2(a + r * cols, x, cols);
}

void matvec_add_avx2(const double* a, const double* x, double* y,
                     std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        y[r] += dot_avx2(a + r * cols, x, cols);
}

void tmatvec_add_avx2(const double* a, const double* x, double* y,
                      std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        axpy_avx2(x[r], a + r * cols, y, cols);
}

void ger_avx2(double* a, const double* u, const double* v,
              std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        axpy_avx2(u[r], v, a + r * cols, cols);
}

} // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops = {
        "avx2",
        dot_avx2,
        axpy_avx2,
        matvec_avx2,
        matvec_add_avx2,
        tmatvec_add_avx2,
        ger_avx2,
    };
    return &ops;
}

} // namespace dga::kernels
