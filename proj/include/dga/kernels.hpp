#pragma once

// Double-precision arithmetic kernels used by the LSTM, whitening and
// stacker inner loops.  A scalar reference implementation is always
// available; an AVX2+FMA variant is selected at runtime when the CPU
// supports it.  The environment variable DGA_KERNELS=scalar|avx2 forces
// a backend (an unavailable forced backend falls back to scalar with a
// warning on stderr).

#include <cstddef>

namespace dga::kernels {

struct Ops {
    const char* name;
    // sum_i a[i]*b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // y = A x, A row-major rows x cols
    void (*matvec)(const double* a, const double* x, double* y,
                   std::size_t rows, std::size_t cols);
    // y += A x
    void (*matvec_add)(const double* a, const double* x, double* y,
                       std::size_t rows, std::size_t cols);
    // y += A^T x, A row-major rows x cols, x has rows entries, y has cols
    void (*tmatvec_add)(const double* a, const double* x, double* y,
                        std::size_t rows, std::size_t cols);
    // A += u v^T, A row-major rows x cols
    void (*ger)(double* a, const double* u, const double* v,
                std::size_t rows, std::size_t cols);
};

// Backend selected for this process (stable for the process lifetime,
// so a fixed seed gives bit-identical results within one machine/env).
const Ops& ops();

const Ops& scalar_ops();

// nullptr when the binary or the CPU lacks AVX2+FMA.
const Ops* avx2_ops();

bool cpu_has_avx2();

} // namespace dga::kernels
