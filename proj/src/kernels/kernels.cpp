#include "qsor/kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace qsor::kernels {

namespace detail {
const KernelTable& scalar_table();
#if QSOR_HAVE_AVX2
const KernelTable& avx2_table();
#endif
} // namespace detail

namespace {

bool avx2_available() {
#if QSOR_HAVE_AVX2
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Active {
    std::atomic<const KernelTable*> table;
    std::atomic<Isa> isa;
    Active() {
        if (avx2_available()) {
#if QSOR_HAVE_AVX2
            table = &detail::avx2_table();
            isa = Isa::Avx2;
            return;
#endif
        }
        table = &detail::scalar_table();
        isa = Isa::Scalar;
    }
};

Active& active() {
    static Active a;
    return a;
}

} // namespace

Isa preferred_isa() { return avx2_available() ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return active().isa.load(); }

const KernelTable& table(Isa isa) {
    switch (isa) {
    case Isa::Scalar:
        return detail::scalar_table();
    case Isa::Avx2:
#if QSOR_HAVE_AVX2
        if (avx2_available()) return detail::avx2_table();
#endif
        throw std::invalid_argument("kernels: avx2 not available on this build/CPU");
    }
    throw std::invalid_argument("kernels: unknown ISA");
}

void use(Isa isa) {
    const KernelTable& t = table(isa);
    active().table = &t;
    active().isa = isa;
}

std::string_view isa_name(Isa isa) {
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

double dot(const double* x, const double* y, std::size_t n) {
    return active().table.load()->dot(x, y, n);
}

double sumsq(const double* x, std::size_t n) {
    return active().table.load()->sumsq(x, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    active().table.load()->axpy(a, x, y, n);
}

void matvec(const double* a, std::size_t rows, std::size_t cols,
            std::size_t lda, const double* x, double* y) {
    active().table.load()->matvec(a, rows, cols, lda, x, y);
}

double nrm2(std::span<const double> x) { return std::sqrt(sumsq(x)); }

} // namespace qsor::kernels
