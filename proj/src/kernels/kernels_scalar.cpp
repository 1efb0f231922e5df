#include "qsor/kernels.hpp"

namespace qsor::kernels::detail {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sumsq_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void matvec_scalar(const double* a, std::size_t rows, std::size_t cols,
                   std::size_t lda, const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        y[r] = dot_scalar(a + r * lda, x, cols);
    }
}

} // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{dot_scalar, sumsq_scalar, axpy_scalar, matvec_scalar};
    return t;
}

} // namespace qsor::kernels::detail
