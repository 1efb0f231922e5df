#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "qsor/linear_system.hpp"

namespace qsor {

enum class Numbering { RowMajor, Boustrophedon };

// Dirichlet data on the four edges of the plate. Each function maps the
// coordinate along its edge to a temperature and must be defined on the
// whole edge.
struct BoundaryConditions {
    std::function<double(double)> bottom; // u(x, 0)
    std::function<double(double)> top;    // u(x, y_max)
    std::function<double(double)> left;   // u(0, y)
    std::function<double(double)> right;  // u(x_max, y)

    static BoundaryConditions constant(double value);
};

// Uniform grid over a square plate of side L. Interior points are
// (i, j) with 1 <= i <= n_interior (x direction), 1 <= j <= m_interior
// (y direction); the boundary ring carries the Dirichlet data.
class Grid2D {
public:
    Grid2D(std::size_t n_interior, std::size_t m_interior, double side_length,
           BoundaryConditions bc, Numbering numbering);

    std::size_t n_interior() const { return n_; }
    std::size_t m_interior() const { return m_; }
    std::size_t interior_count() const { return n_ * m_; }
    double side_length() const { return side_; }
    double spacing() const { return h_; }
    Numbering numbering() const { return numbering_; }
    const BoundaryConditions& bc() const { return bc_; }

    double x_of(std::size_t i) const { return double(i) * h_; } // i in [0, n+1]
    double y_of(std::size_t j) const { return double(j) * h_; } // j in [0, m+1]

    bool is_interior(long i, long j) const {
        return i >= 1 && i <= long(n_) && j >= 1 && j <= long(m_);
    }
    bool is_boundary(long i, long j) const;

    // Linear index of interior point (i, j), and its inverse.
    std::size_t index_of(std::size_t i, std::size_t j) const;
    std::pair<std::size_t, std::size_t> point_of(std::size_t index) const;

    // Dirichlet value at a boundary lattice point.
    double boundary_value(long i, long j) const;

private:
    std::size_t n_;
    std::size_t m_;
    double side_;
    double h_;
    BoundaryConditions bc_;
    Numbering numbering_;
};

Grid2D build_grid(std::size_t n_interior, std::size_t m_interior, double side_length,
                  BoundaryConditions bc, Numbering numbering = Numbering::RowMajor);

// Assembles the 5-point stencil equations A x = b over the interior points,
// where b already carries the boundary contributions with the sign flipped
// so that solvers see a standard right-hand side.
LinearSystem assemble_system(const Grid2D& grid);

// (u(i+1,j) + u(i-1,j) + u(i,j+1) + u(i,j-1) - 4 u(i,j)) / h^2 for a grid
// function given as a lookup; a missing stencil value is an error.
double discrete_laplacian(const std::function<std::optional<double>(long, long)>& values,
                          long i, long j, double h);

// Closed-form harmonic solution 100 x y / L^2 for the ramped-edge plate;
// it restricts exactly to the discrete solution of that benchmark.
double analytic_reference(double x, double y, double side_length);

// analytic_reference sampled at the interior points, in grid numbering order.
std::vector<double> sample_analytic_reference(const Grid2D& grid);

} // namespace qsor
