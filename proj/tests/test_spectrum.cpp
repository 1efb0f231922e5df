#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "qsor/grid.hpp"
#include "qsor/rng.hpp"
#include "qsor/spectrum.hpp"
#include "support/oracles.hpp"

using namespace qsor;

namespace {

// complex determinant of (a - lambda I) via complex LU, for validating
// computed eigenvalues of small matrices
std::complex<double> char_poly_at(const Matrix& a, std::complex<double> lambda) {
    const std::size_t n = a.rows();
    std::vector<std::vector<std::complex<double>>> m(n, std::vector<std::complex<double>>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m[r][c] = a(r, c) - (r == c ? lambda : 0.0);
    std::complex<double> det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m[i][k]) > std::abs(m[piv][k])) piv = i;
        if (piv != k) {
            std::swap(m[piv], m[k]);
            det = -det;
        }
        if (std::abs(m[k][k]) == 0.0) return 0.0;
        det *= m[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const std::complex<double> f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    return det;
}

std::vector<double> sorted_moduli(const std::vector<std::complex<double>>& eig) {
    std::vector<double> mods;
    for (const auto& e : eig) mods.push_back(std::abs(e));
    std::sort(mods.begin(), mods.end());
    return mods;
}

} // namespace

TEST_CASE("spectrum: symmetric tridiagonal with a known spectrum") {
    // C = tridiag(1, -4, 1), eigenvalues -4 + 2 cos(k pi / (n+1))
    const std::size_t n = 9;
    Matrix c(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        c(i, i) = -4.0;
        if (i + 1 < n) {
            c(i, i + 1) = 1.0;
            c(i + 1, i) = 1.0;
        }
    }
    auto mods = sorted_moduli(dense_eigenvalues(c));
    std::vector<double> expect;
    for (std::size_t k = 1; k <= n; ++k)
        expect.push_back(std::abs(-4.0 + 2.0 * std::cos(double(k) * std::numbers::pi / 10.0)));
    std::sort(expect.begin(), expect.end());
    REQUIRE(mods.size() == n);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(mods[i] == doctest::Approx(expect[i]).epsilon(1e-10));
}

TEST_CASE("spectrum: assembled plate operator has the product-mode spectrum") {
    const Grid2D grid = oracle::plate_grid(9);
    const LinearSystem sys = assemble_system(grid);
    auto mods = sorted_moduli(dense_eigenvalues(sys.a()));

    std::vector<double> expect;
    const double theta = std::numbers::pi / 10.0;
    for (std::size_t p = 1; p <= 9; ++p)
        for (std::size_t q = 1; q <= 9; ++q)
            expect.push_back(std::abs(-4.0 + 2.0 * std::cos(double(p) * theta) +
                                      2.0 * std::cos(double(q) * theta)));
    std::sort(expect.begin(), expect.end());
    REQUIRE(mods.size() == expect.size());
    for (std::size_t i = 0; i < mods.size(); ++i)
        CHECK(mods[i] == doctest::Approx(expect[i]).epsilon(1e-8));
}

TEST_CASE("spectrum: rotation matrix gives a unit-modulus complex pair") {
    Matrix r(2, 2);
    const double t = 1.1;
    r(0, 0) = std::cos(t);
    r(0, 1) = -std::sin(t);
    r(1, 0) = std::sin(t);
    r(1, 1) = std::cos(t);
    const auto eig = dense_eigenvalues(r);
    REQUIRE(eig.size() == 2);
    CHECK(std::abs(eig[0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eig[1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eig[0].imag()) == doctest::Approx(std::sin(t)).epsilon(1e-12));
}

TEST_CASE("spectrum: defective Jordan block") {
    Matrix j(2, 2);
    j(0, 0) = 1.0;
    j(0, 1) = 1.0;
    j(1, 1) = 1.0;
    const auto mods = sorted_moduli(dense_eigenvalues(j));
    CHECK(mods[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(mods[1] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("spectrum: zero and identity") {
    CHECK(spectral_radius_dense(Matrix(5, 5)) == 0.0);
    CHECK(spectral_radius_dense(Matrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("spectrum: random matrices validated by trace identities and char poly") {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + rng.uniform_below(6);
        Matrix a(n, n);
        double scale = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) = std::floor(7.0 * rng.uniform01()) - 3.0;
                scale = std::max(scale, std::abs(a(r, c)));
            }
        scale = std::max(scale, 1.0);

        const auto eig = dense_eigenvalues(a);
        REQUIRE(eig.size() == n);

        std::complex<double> sum = 0.0, sum_sq = 0.0;
        for (const auto& e : eig) {
            sum += e;
            sum_sq += e * e;
        }
        double trace = 0.0, trace_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            trace += a(i, i);
            for (std::size_t j = 0; j < n; ++j) trace_sq += a(i, j) * a(j, i);
        }
        CHECK(std::abs(sum - trace) < 1e-8 * scale * double(n));
        CHECK(std::abs(sum_sq - trace_sq) < 1e-7 * scale * scale * double(n));

        // each computed eigenvalue nearly annihilates det(A - lambda I)
        for (const auto& e : eig) {
            const double p = std::abs(char_poly_at(a, e));
            CHECK(p < 1e-6 * std::pow(2.0 * scale * std::sqrt(double(n)), double(n)));
        }
    }
}
