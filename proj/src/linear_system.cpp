#include "qsor/linear_system.hpp"

#include <stdexcept>

namespace qsor {

LinearSystem::LinearSystem(Matrix a, std::vector<double> b,
                           std::optional<std::vector<double>> reference)
    : a_(std::move(a)), b_(std::move(b)), reference_(std::move(reference)) {
    if (!a_.square()) throw std::invalid_argument("LinearSystem: matrix must be square");
    if (a_.rows() != b_.size())
        throw std::invalid_argument("LinearSystem: rhs length does not match matrix");
    if (a_.rows() == 0) throw std::invalid_argument("LinearSystem: empty system");
    if (reference_ && reference_->size() != b_.size())
        throw std::invalid_argument("LinearSystem: reference length does not match matrix");

    const std::size_t n = size();
    sparse_.ptr.assign(n + 1, 0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (a_(r, c) != 0.0) {
                sparse_.col.push_back(c);
                sparse_.val.push_back(a_(r, c));
            }
        }
        sparse_.ptr[r + 1] = sparse_.col.size();
    }
}

void LinearSystem::set_reference_solution(std::vector<double> reference) {
    if (reference.size() != size())
        throw std::invalid_argument("LinearSystem: reference length does not match matrix");
    reference_ = std::move(reference);
}

std::vector<double> LinearSystem::apply(std::span<const double> x) const {
    if (x.size() != size()) throw std::invalid_argument("apply: vector length mismatch");
    std::vector<double> y(size(), 0.0);
    for (std::size_t r = 0; r < size(); ++r) {
        double acc = 0.0;
        for (std::size_t k = sparse_.ptr[r]; k < sparse_.ptr[r + 1]; ++k)
            acc += sparse_.val[k] * x[sparse_.col[k]];
        y[r] = acc;
    }
    return y;
}

double LinearSystem::row_dot_outside(std::size_t row, std::span<const double> x,
                                     std::size_t skip_begin, std::size_t skip_end) const {
    double acc = 0.0;
    for (std::size_t k = sparse_.ptr[row]; k < sparse_.ptr[row + 1]; ++k) {
        const std::size_t c = sparse_.col[k];
        if (c < skip_begin || c >= skip_end) acc += sparse_.val[k] * x[c];
    }
    return acc;
}

} // namespace qsor
