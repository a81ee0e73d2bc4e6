#include "dga/kernels.hpp"

namespace dga::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_scalar(const double* a, const double* x, double* y,
                   std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        y[r] = dot_scalar(a + r * cols, x, cols);
}

void matvec_add_scalar(const double* a, const double* x, double* y,
                       std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        y[r] += dot_scalar(a + r * cols, x, cols);
}

void tmatvec_add_scalar(const double* a, const double* x, double* y,
                        std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        axpy_scalar(x[r], a + r * cols, y, cols);
}

void ger_scalar(double* a, const double* u, const double* v,
                std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r)
        axpy_scalar(u[r], v, a + r * cols, cols);
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",
        dot_scalar,
        axpy_scalar,
        matvec_scalar,
        matvec_add_scalar,
        tmatvec_add_scalar,
        ger_scalar,
    };
    return ops;
}

} // namespace dga::kernels
