#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops used by the solvers and the sampler. A scalar
// reference implementation always exists; an AVX2 variant is selected at
// runtime when the CPU supports it. The two are equivalence-tested against
// each other, so everything above this layer is ISA-agnostic.
namespace qsor::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sumsq)(const double* x, std::size_t n);
    // y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // y = A x for a row-major rows x cols matrix with leading dimension lda
    void (*matvec)(const double* a, std::size_t rows, std::size_t cols,
                   std::size_t lda, const double* x, double* y);
};

// Best ISA supported by this CPU (and compiled into this binary).
Isa preferred_isa();

// ISA currently driving the free functions below. Defaults to preferred_isa().
Isa active_isa();

// Force a specific ISA (tests use this to compare variants). Throws
// std::invalid_argument if the ISA is not available in this build/CPU.
void use(Isa isa);

const KernelTable& table(Isa isa);

std::string_view isa_name(Isa isa);

double dot(const double* x, const double* y, std::size_t n);
double sumsq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void matvec(const double* a, std::size_t rows, std::size_t cols,
            std::size_t lda, const double* x, double* y);

inline double dot(std::span<const double> x, std::span<const double> y) {
    return dot(x.data(), y.data(), x.size());
}

inline double sumsq(std::span<const double> x) {
    return sumsq(x.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    axpy(a, x.data(), y.data(), x.size());
}

double nrm2(std::span<const double> x);

} // namespace qsor::kernels
