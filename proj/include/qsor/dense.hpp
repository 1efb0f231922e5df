#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qsor {

// Row-major dense matrix. Systems at desk scale stay small (N up to a few
// hundred), so dense storage keeps block extraction and diagnostics simple.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Non-owning view of a dense block (submatrix), row stride in elements.
struct ConstMatrixView {
    const double* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t stride = 0;

    double operator()(std::size_t r, std::size_t c) const { return data[r * stride + c]; }
    const double* row_ptr(std::size_t r) const { return data + r * stride; }

    static ConstMatrixView of(const Matrix& m) {
        return {m.data(), m.rows(), m.cols(), m.cols()};
    }

    ConstMatrixView block(std::size_t r0, std::size_t c0,
                          std::size_t nr, std::size_t nc) const {
        return {data + r0 * stride + c0, nr, nc, stride};
    }

    Matrix to_matrix() const {
        Matrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = (*this)(r, c);
        return m;
    }
};

// LU factorization with partial pivoting. Throws SingularBlockError when a
// pivot falls below 1e-14 relative to the largest entry of the input.
class LuFactors {
public:
    explicit LuFactors(ConstMatrixView a);

    std::size_t size() const { return lu_.rows(); }
    void solve_inplace(std::span<double> rhs) const;
    std::vector<double> solve(std::span<const double> rhs) const;
    // Solves for several right-hand sides laid out as columns of a dense
    // row-major rows x ncols block.
    void solve_columns_inplace(double* rhs, std::size_t ncols, std::size_t ldrhs) const;

private:
    Matrix lu_;
    std::vector<int> perm_;
};

std::vector<double> matvec(ConstMatrixView a, std::span<const double> x);

double max_abs(ConstMatrixView a);

} // namespace qsor
