#include <doctest.h>

#include <cmath>

#include "qsor/dense.hpp"
#include "qsor/errors.hpp"
#include "qsor/rng.hpp"
#include "support/oracles.hpp"

using namespace qsor;

TEST_CASE("lu: solves random diagonally dominant systems") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(12);
        const LinearSystem sys = oracle::random_dd_system(n, rng);
        LuFactors lu(sys.view());
        const auto x = lu.solve(sys.b());
        const auto expect = oracle::gauss_solve(oracle::to_rows(sys.a()), sys.b());
        CHECK(oracle::max_abs_diff(x, expect) < 1e-10);
    }
}

TEST_CASE("lu: singular matrix rejected") {
    Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 1.0;
    CHECK_THROWS_AS(LuFactors(ConstMatrixView::of(a)), SingularBlockError);
}

TEST_CASE("lu: multi-rhs column solve matches vector solve") {
    Rng rng(23);
    const LinearSystem sys = oracle::random_dd_system(6, rng);
    LuFactors lu(sys.view());

    Matrix rhs(6, 3);
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 3; ++c) rhs(r, c) = rng.uniform01();
    Matrix cols = rhs;
    lu.solve_columns_inplace(cols.data(), 3, 3);

    for (std::size_t c = 0; c < 3; ++c) {
        std::vector<double> b(6);
        for (std::size_t r = 0; r < 6; ++r) b[r] = rhs(r, c);
        const auto x = lu.solve(b);
        for (std::size_t r = 0; r < 6; ++r)
            CHECK(cols(r, c) == doctest::Approx(x[r]).epsilon(1e-12));
    }
}

TEST_CASE("matrix view: block extraction") {
    Matrix m(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) m(r, c) = double(10 * r + c);
    const auto blk = ConstMatrixView::of(m).block(1, 2, 2, 2);
    CHECK(blk(0, 0) == 12.0);
    CHECK(blk(0, 1) == 13.0);
    CHECK(blk(1, 0) == 22.0);
    CHECK(blk(1, 1) == 23.0);
}
