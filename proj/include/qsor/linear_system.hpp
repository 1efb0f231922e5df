#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qsor/dense.hpp"

namespace qsor {

// Square system A x = b in dense storage, with an optional reference
// solution for benchmark-style error monitoring. A compressed sparse row
// index of the nonzeros is built once so iteration loops can skip zeros.
class LinearSystem {
public:
    LinearSystem(Matrix a, std::vector<double> b,
                 std::optional<std::vector<double>> reference = std::nullopt);

    std::size_t size() const { return b_.size(); }
    const Matrix& a() const { return a_; }
    const std::vector<double>& b() const { return b_; }
    ConstMatrixView view() const { return ConstMatrixView::of(a_); }

    const std::optional<std::vector<double>>& reference_solution() const { return reference_; }
    void set_reference_solution(std::vector<double> reference);

    struct SparseRows {
        std::vector<std::size_t> ptr; // size N+1
        std::vector<std::size_t> col;
        std::vector<double> val;
    };
    const SparseRows& sparse() const { return sparse_; }

    // A x using the sparse index.
    std::vector<double> apply(std::span<const double> x) const;

    // Row dot restricted to columns outside [skip_begin, skip_end).
    double row_dot_outside(std::size_t row, std::span<const double> x,
                           std::size_t skip_begin, std::size_t skip_end) const;

private:
    Matrix a_;
    std::vector<double> b_;
    std::optional<std::vector<double>> reference_;
    SparseRows sparse_;
};

} // namespace qsor
