#include <doctest.h>

#include <cmath>
#include <set>

#include "qsor/grid.hpp"
#include "qsor/rng.hpp"
#include "support/oracles.hpp"

using namespace qsor;

TEST_CASE("build_grid: dimensions and spacing") {
    const Grid2D plate = oracle::plate_grid(9);
    CHECK(plate.interior_count() == 81);
    CHECK(plate.spacing() == doctest::Approx(0.1).epsilon(1e-15));

    const Grid2D tiny = build_grid(1, 1, 1.0, BoundaryConditions::constant(0.0));
    CHECK(tiny.interior_count() == 1);
    CHECK(tiny.spacing() == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(build_grid(0, 1, 1.0, BoundaryConditions::constant(0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1, 0, 1.0, BoundaryConditions::constant(0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1, 1, 0.0, BoundaryConditions::constant(0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1, 1, -2.0, BoundaryConditions::constant(0.0)),
                    std::invalid_argument);
}

TEST_CASE("index_of: row-major neighbor offsets") {
    const Grid2D grid = oracle::plate_grid(9);

    // vertically adjacent points differ by the row width
    CHECK(grid.index_of(4, 5) - grid.index_of(4, 4) == 9);

    // 1-based point 12 of a 9-wide grid has 1-based neighbors 3, 11, 13, 21
    const std::size_t center = grid.index_of(3, 2);
    CHECK(center + 1 == 12);
    CHECK(grid.index_of(3, 1) + 1 == 3);
    CHECK(grid.index_of(2, 2) + 1 == 11);
    CHECK(grid.index_of(4, 2) + 1 == 13);
    CHECK(grid.index_of(3, 3) + 1 == 21);

    const Grid2D single = build_grid(1, 1, 1.0, BoundaryConditions::constant(0.0));
    CHECK(single.index_of(1, 1) == 0);

    CHECK_THROWS_AS(grid.index_of(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(grid.index_of(10, 1), std::invalid_argument);
    CHECK_THROWS_AS(grid.point_of(81), std::invalid_argument);
}

TEST_CASE("numbering: point_of inverts index_of in both modes") {
    for (Numbering numbering : {Numbering::RowMajor, Numbering::Boustrophedon}) {
        const Grid2D grid = build_grid(5, 4, 1.0, BoundaryConditions::constant(0.0), numbering);
        std::set<std::size_t> seen;
        for (std::size_t j = 1; j <= 4; ++j) {
            for (std::size_t i = 1; i <= 5; ++i) {
                const std::size_t idx = grid.index_of(i, j);
                CHECK(idx < grid.interior_count());
                seen.insert(idx);
                const auto [pi, pj] = grid.point_of(idx);
                CHECK(pi == i);
                CHECK(pj == j);
            }
        }
        CHECK(seen.size() == grid.interior_count()); // bijection
    }
}

TEST_CASE("boustrophedon: alternating rows reverse") {
    const Grid2D grid =
        build_grid(3, 3, 1.0, BoundaryConditions::constant(0.0), Numbering::Boustrophedon);
    CHECK(grid.index_of(1, 1) == 0);
    CHECK(grid.index_of(3, 1) == 2);
    CHECK(grid.index_of(3, 2) == 3); // second row runs right to left
    CHECK(grid.index_of(1, 2) == 5);
    CHECK(grid.index_of(1, 3) == 6);
}

TEST_CASE("assemble_system: 2x2 interior with zero boundaries") {
    const Grid2D grid = build_grid(2, 2, 1.0, BoundaryConditions::constant(0.0));
    const LinearSystem sys = assemble_system(grid);
    const double expect[4][4] = {{-4, 1, 1, 0}, {1, -4, 0, 1}, {1, 0, -4, 1}, {0, 1, 1, -4}};
    for (std::size_t r = 0; r < 4; ++r) {
        CHECK(sys.b()[r] == 0.0);
        for (std::size_t c = 0; c < 4; ++c) CHECK(sys.a()(r, c) == expect[r][c]);
    }
}

TEST_CASE("assemble_system: single point with hot boundaries") {
    const Grid2D grid = build_grid(1, 1, 1.0, BoundaryConditions::constant(10.0));
    const LinearSystem sys = assemble_system(grid);
    CHECK(sys.a()(0, 0) == -4.0);
    CHECK(sys.b()[0] == -40.0); // A x = -b_c
    CHECK(sys.b()[0] / sys.a()(0, 0) == doctest::Approx(10.0));
}

TEST_CASE("assemble_system: plate system is block tridiagonal (C, I)") {
    const Grid2D grid = oracle::plate_grid(9);
    const LinearSystem sys = assemble_system(grid);
    REQUIRE(sys.size() == 81);

    for (std::size_t bi = 0; bi < 9; ++bi) {
        for (std::size_t bj = 0; bj < 9; ++bj) {
            const auto blk = sys.view().block(9 * bi, 9 * bj, 9, 9);
            for (std::size_t r = 0; r < 9; ++r) {
                for (std::size_t c = 0; c < 9; ++c) {
                    double expect = 0.0;
                    if (bi == bj) {
                        if (r == c)
                            expect = -4.0;
                        else if (r + 1 == c || c + 1 == r)
                            expect = 1.0;
                    } else if (bi + 1 == bj || bj + 1 == bi) {
                        expect = (r == c) ? 1.0 : 0.0;
                    }
                    CHECK(blk(r, c) == expect);
                }
            }
        }
    }

    // symmetry and the stencil row profile
    std::size_t max_offdiag = 0;
    for (std::size_t r = 0; r < 81; ++r) {
        std::size_t ones = 0;
        for (std::size_t c = 0; c < 81; ++c) {
            CHECK(sys.a()(r, c) == sys.a()(c, r));
            if (r != c) {
                CHECK((sys.a()(r, c) == 0.0 || sys.a()(r, c) == 1.0));
                if (sys.a()(r, c) == 1.0) ++ones;
            }
        }
        CHECK(ones <= 4);
        max_offdiag = std::max(max_offdiag, ones);
    }
    CHECK(max_offdiag == 4);
}

TEST_CASE("assemble_system: bilinear functions satisfy the equations exactly") {
    Rng rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const double ca = 2.0 * rng.uniform01() - 1.0;
        const double cb = 2.0 * rng.uniform01() - 1.0;
        const double cc = 2.0 * rng.uniform01() - 1.0;
        const double cd = 2.0 * rng.uniform01() - 1.0;
        auto u = [=](double x, double y) { return ca + cb * x + cc * y + cd * x * y; };

        const double side = 2.0;
        BoundaryConditions bc{
            [&](double x) { return u(x, 0.0); },
            [&](double x) { return u(x, side); },
            [&](double y) { return u(0.0, y); },
            [&](double y) { return u(side, y); },
        };
        const Grid2D grid = build_grid(6, 6, side, bc);
        const LinearSystem sys = assemble_system(grid);

        std::vector<double> exact(grid.interior_count());
        for (std::size_t idx = 0; idx < exact.size(); ++idx) {
            const auto [i, j] = grid.point_of(idx);
            exact[idx] = u(grid.x_of(i), grid.y_of(j));
        }
        const auto ax = sys.apply(exact);
        for (std::size_t r = 0; r < exact.size(); ++r)
            CHECK(ax[r] == doctest::Approx(sys.b()[r]).epsilon(1e-12).scale(10.0));
    }
}

TEST_CASE("assemble_system: zero boundaries give exactly zero rhs") {
    const Grid2D grid = build_grid(7, 5, 3.0, BoundaryConditions::constant(0.0));
    const LinearSystem sys = assemble_system(grid);
    for (double v : sys.b()) CHECK(v == 0.0);
}

TEST_CASE("assemble_system: numbering modes agree after permutation") {
    const double side = 1.0;
    const Grid2D row_major = oracle::plate_grid(5, side, Numbering::RowMajor);
    const Grid2D snake = oracle::plate_grid(5, side, Numbering::Boustrophedon);

    const LinearSystem sys_rm = assemble_system(row_major);
    const LinearSystem sys_bo = assemble_system(snake);

    LuFactors lu_rm(sys_rm.view());
    LuFactors lu_bo(sys_bo.view());
    const auto x_rm = lu_rm.solve(sys_rm.b());
    const auto x_bo = lu_bo.solve(sys_bo.b());

    for (std::size_t j = 1; j <= 5; ++j)
        for (std::size_t i = 1; i <= 5; ++i)
            CHECK(x_rm[row_major.index_of(i, j)] ==
                  doctest::Approx(x_bo[snake.index_of(i, j)]).epsilon(1e-12));
}

TEST_CASE("discrete_laplacian: exactness and neighbor indexing") {
    const double h = 0.25;
    auto bilinear = [&](long i, long j) -> std::optional<double> {
        return double(i) * h * double(j) * h;
    };
    CHECK(discrete_laplacian(bilinear, 3, 2, h) == doctest::Approx(0.0).epsilon(1e-13));

    auto quadratic = [&](long i, long j) -> std::optional<double> {
        (void)j;
        return double(i) * h * double(i) * h;
    };
    CHECK(discrete_laplacian(quadratic, 2, 4, h) == doctest::Approx(2.0).epsilon(1e-11));

    // u indexed by the 1-based row-major numbering of a 9-wide grid
    const Grid2D grid = oracle::plate_grid(9);
    Rng rng(17);
    std::vector<double> u(81);
    for (auto& v : u) v = 10.0 * rng.uniform01();
    auto field = [&](long i, long j) -> std::optional<double> {
        if (!grid.is_interior(i, j)) return std::nullopt;
        return u[grid.index_of(std::size_t(i), std::size_t(j))];
    };
    const double hh = grid.spacing();
    // point 12 pulls points 3, 11, 13, 21 (1-based)
    const double expect = (u[2] + u[10] + u[12] + u[20] - 4.0 * u[11]) / (hh * hh);
    CHECK(discrete_laplacian(field, 3, 2, hh) == doctest::Approx(expect).epsilon(1e-13));

    auto missing = [&](long i, long j) -> std::optional<double> {
        if (i == 3 && j == 1) return std::nullopt;
        return field(i, j);
    };
    CHECK_THROWS_AS(discrete_laplacian(missing, 3, 2, hh), std::invalid_argument);
}

TEST_CASE("analytic_reference: edges and corner") {
    const double side = 2.0;
    CHECK(analytic_reference(0.0, 1.3, side) == 0.0);
    CHECK(analytic_reference(0.7, 0.0, side) == 0.0);
    CHECK(analytic_reference(side, side, side) == doctest::Approx(100.0));
    CHECK(analytic_reference(side / 2, side / 2, side) == doctest::Approx(25.0));
}

TEST_CASE("analytic_reference: restriction solves the assembled plate system") {
    const Grid2D grid = oracle::plate_grid(9);
    const LinearSystem sys = assemble_system(grid);
    const auto exact = sample_analytic_reference(grid);
    const auto ax = sys.apply(exact);
    for (std::size_t r = 0; r < ax.size(); ++r)
        CHECK(ax[r] == doctest::Approx(sys.b()[r]).epsilon(1e-12).scale(100.0));
}
