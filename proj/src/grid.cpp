#include "qsor/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsor {

BoundaryConditions BoundaryConditions::constant(double value) {
    auto f = [value](double) { return value; };
    return {f, f, f, f};
}

Grid2D::Grid2D(std::size_t n_interior, std::size_t m_interior, double side_length,
               BoundaryConditions bc, Numbering numbering)
    : n_(n_interior), m_(m_interior), side_(side_length), bc_(std::move(bc)),
      numbering_(numbering) {
    if (n_ < 1 || m_ < 1)
        throw std::invalid_argument("Grid2D: interior dimensions must be at least 1");
    if (!(side_ > 0.0)) throw std::invalid_argument("Grid2D: side_length must be positive");
    if (!bc_.bottom || !bc_.top || !bc_.left || !bc_.right)
        throw std::invalid_argument("Grid2D: all four edge functions are required");
    h_ = side_ / double(n_ + 1);
}

bool Grid2D::is_boundary(long i, long j) const {
    if (i < 0 || j < 0 || i > long(n_) + 1 || j > long(m_) + 1) return false;
    return !is_interior(i, j);
}

std::size_t Grid2D::index_of(std::size_t i, std::size_t j) const {
    if (!is_interior(long(i), long(j)))
        throw std::invalid_argument("index_of: (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") is not an interior point");
    if (numbering_ == Numbering::RowMajor) return (j - 1) * n_ + (i - 1);
    // boustrophedon: x order reverses on every other grid row
    const std::size_t row = j - 1;
    const std::size_t offset = (row % 2 == 0) ? (i - 1) : (n_ - i);
    return row * n_ + offset;
}

std::pair<std::size_t, std::size_t> Grid2D::point_of(std::size_t index) const {
    if (index >= interior_count())
        throw std::invalid_argument("point_of: index out of range");
    const std::size_t row = index / n_;
    const std::size_t offset = index % n_;
    std::size_t i;
    if (numbering_ == Numbering::RowMajor || row % 2 == 0) {
        i = offset + 1;
    } else {
        i = n_ - offset;
    }
    return {i, row + 1};
}

double Grid2D::boundary_value(long i, long j) const {
    if (!is_boundary(i, j))
        throw std::invalid_argument("boundary_value: not a boundary point");
    if (j == 0) return bc_.bottom(x_of(std::size_t(i)));
    if (j == long(m_) + 1) return bc_.top(x_of(std::size_t(i)));
    if (i == 0) return bc_.left(y_of(std::size_t(j)));
    return bc_.right(y_of(std::size_t(j)));
}

Grid2D build_grid(std::size_t n_interior, std::size_t m_interior, double side_length,
                  BoundaryConditions bc, Numbering numbering) {
    return Grid2D(n_interior, m_interior, side_length, std::move(bc), numbering);
}

LinearSystem assemble_system(const Grid2D& grid) {
    const std::size_t count = grid.interior_count();
    Matrix a(count, count);
    std::vector<double> b(count, 0.0);

    constexpr long dx[4] = {1, -1, 0, 0};
    constexpr long dy[4] = {0, 0, 1, -1};

    for (std::size_t j = 1; j <= grid.m_interior(); ++j) {
        for (std::size_t i = 1; i <= grid.n_interior(); ++i) {
            const std::size_t row = grid.index_of(i, j);
            a(row, row) = -4.0;
            for (int d = 0; d < 4; ++d) {
                const long ni = long(i) + dx[d];
                const long nj = long(j) + dy[d];
                if (grid.is_interior(ni, nj)) {
                    a(row, grid.index_of(std::size_t(ni), std::size_t(nj))) = 1.0;
                } else {
                    // boundary neighbor: move its known value to the rhs
                    b[row] -= grid.boundary_value(ni, nj);
                }
            }
        }
    }
    return LinearSystem(std::move(a), std::move(b));
}

double discrete_laplacian(const std::function<std::optional<double>(long, long)>& values,
                          long i, long j, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("discrete_laplacian: h must be positive");
    const long pts[5][2] = {{i, j}, {i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
    double u[5];
    for (int k = 0; k < 5; ++k) {
        const auto v = values(pts[k][0], pts[k][1]);
        if (!v)
            throw std::invalid_argument("discrete_laplacian: missing stencil value at (" +
                                        std::to_string(pts[k][0]) + ", " +
                                        std::to_string(pts[k][1]) + ")");
        u[k] = *v;
    }
    return (u[1] + u[2] + u[3] + u[4] - 4.0 * u[0]) / (h * h);
}

double analytic_reference(double x, double y, double side_length) {
    return 100.0 * x * y / (side_length * side_length);
}

std::vector<double> sample_analytic_reference(const Grid2D& grid) {
    std::vector<double> u(grid.interior_count());
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
        const auto [i, j] = grid.point_of(idx);
        u[idx] = analytic_reference(grid.x_of(i), grid.y_of(j), grid.side_length());
    }
    return u;
}

} // namespace qsor
