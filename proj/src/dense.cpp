#include "qsor/dense.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qsor/errors.hpp"
#include "qsor/kernels.hpp"

namespace qsor {

LuFactors::LuFactors(ConstMatrixView a) {
    if (a.rows != a.cols) throw std::invalid_argument("lu_factor: matrix must be square");
    const std::size_t n = a.rows;
    lu_ = a.to_matrix();
    perm_.resize(n);

    const double pivot_floor = 1e-14 * std::max(max_abs(a), 1e-300);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= pivot_floor) {
            throw SingularBlockError(0, "lu_factor: singular matrix (pivot " +
                                            std::to_string(best) + " at step " +
                                            std::to_string(k) + ")");
        }
        perm_[k] = int(piv);
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(piv, c));
        }
        const double inv = 1.0 / lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu_(i, k) * inv;
            lu_(i, k) = f;
            if (f != 0.0) {
                kernels::axpy(-f, lu_.row(k).subspan(k + 1), lu_.row(i).subspan(k + 1));
            }
        }
    }
}

void LuFactors::solve_inplace(std::span<double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n) throw std::invalid_argument("lu_solve: rhs length mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        std::swap(rhs[k], rhs[std::size_t(perm_[k])]);
        const double v = rhs[k];
        if (v != 0.0) {
            for (std::size_t i = k + 1; i < n; ++i) rhs[i] -= lu_(i, k) * v;
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        double v = rhs[k] - kernels::dot(lu_.row(k).subspan(k + 1), rhs.subspan(k + 1));
        rhs[k] = v / lu_(k, k);
    }
}

std::vector<double> LuFactors::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_inplace(x);
    return x;
}

void LuFactors::solve_columns_inplace(double* rhs, std::size_t ncols, std::size_t ldrhs) const {
    const std::size_t n = size();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t p = std::size_t(perm_[k]);
        if (p != k) {
            for (std::size_t c = 0; c < ncols; ++c)
                std::swap(rhs[k * ldrhs + c], rhs[p * ldrhs + c]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu_(i, k);
            if (f != 0.0) kernels::axpy(-f, rhs + k * ldrhs, rhs + i * ldrhs, ncols);
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu_(k, i);
            if (f != 0.0) kernels::axpy(-f, rhs + i * ldrhs, rhs + k * ldrhs, ncols);
        }
        const double inv = 1.0 / lu_(k, k);
        for (std::size_t c = 0; c < ncols; ++c) rhs[k * ldrhs + c] *= inv;
    }
}

std::vector<double> matvec(ConstMatrixView a, std::span<const double> x) {
    if (x.size() != a.cols) throw std::invalid_argument("matvec: size mismatch");
    std::vector<double> y(a.rows);
    if (a.stride == a.cols) {
        kernels::matvec(a.data, a.rows, a.cols, a.stride, x.data(), y.data());
    } else {
        for (std::size_t r = 0; r < a.rows; ++r)
            y[r] = kernels::dot(a.row_ptr(r), x.data(), a.cols);
    }
    return y;
}

double max_abs(ConstMatrixView a) {
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows; ++r)
        for (std::size_t c = 0; c < a.cols; ++c) m = std::max(m, std::abs(a(r, c)));
    return m;
}

} // namespace qsor
