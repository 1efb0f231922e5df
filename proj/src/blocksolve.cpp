#include "qsor/blocksolve.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qsor/errors.hpp"
#include "qsor/kernels.hpp"
#include "qsor/rng.hpp"
#include "qsor/spectrum.hpp"

namespace qsor {

BlockPartition partition(const LinearSystem& system, std::size_t block_count) {
    const std::size_t n = system.size();
    if (block_count < 1) throw std::invalid_argument("partition: block_count must be >= 1");
    if (n % block_count != 0)
        throw std::invalid_argument("partition: block_count " + std::to_string(block_count) +
                                    " does not divide system size " + std::to_string(n));
    return BlockPartition{block_count, n / block_count};
}

BlockSplitting::BlockSplitting(const LinearSystem& system, BlockPartition part)
    : system_(&system), part_(part) {
    if (part_.total() != system.size())
        throw std::invalid_argument("BlockSplitting: partition does not cover the system");
    diag_lu_.reserve(part_.block_count);
    for (std::size_t i = 0; i < part_.block_count; ++i) {
        try {
            diag_lu_.emplace_back(block(i, i));
        } catch (const SingularBlockError& e) {
            throw SingularBlockError(i, "split_dlu: diagonal block " + std::to_string(i) +
                                            " is singular");
        }
    }
}

ConstMatrixView BlockSplitting::block(std::size_t i, std::size_t j) const {
    return system_->view().block(part_.begin(i), part_.begin(j), part_.block_size,
                                 part_.block_size);
}

Matrix BlockSplitting::d_block(std::size_t i, std::size_t j) const {
    if (i == j) return block(i, j).to_matrix();
    return Matrix(part_.block_size, part_.block_size);
}

Matrix BlockSplitting::l_block(std::size_t i, std::size_t j) const {
    if (i > j) return block(i, j).to_matrix();
    return Matrix(part_.block_size, part_.block_size);
}

Matrix BlockSplitting::u_block(std::size_t i, std::size_t j) const {
    if (i < j) return block(i, j).to_matrix();
    return Matrix(part_.block_size, part_.block_size);
}

Matrix BlockSplitting::e_matrix(double omega) const {
    const std::size_t n = size();
    const std::size_t m = part_.block_size;
    Matrix e(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t bi = r / m;
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t bj = c / m;
            if (bi == bj) {
                e(r, c) = system_->a()(r, c) / omega;
            } else if (bi > bj) {
                e(r, c) = system_->a()(r, c);
            }
        }
    }
    return e;
}

Matrix BlockSplitting::f_matrix(double omega) const {
    const std::size_t n = size();
    const std::size_t m = part_.block_size;
    Matrix f(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t bi = r / m;
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t bj = c / m;
            if (bi == bj) {
                f(r, c) = (1.0 / omega - 1.0) * system_->a()(r, c);
            } else if (bi < bj) {
                f(r, c) = -system_->a()(r, c);
            }
        }
    }
    return f;
}

std::vector<double> BlockSplitting::apply_offdiag(std::span<const double> x) const {
    const std::size_t n = size();
    const std::size_t m = part_.block_size;
    std::vector<double> y(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t bi = r / m;
        y[r] = system_->row_dot_outside(r, x, part_.begin(bi), part_.end(bi));
    }
    return y;
}

void BlockSplitting::solve_diag_inplace(std::span<double> z) const {
    const std::size_t m = part_.block_size;
    for (std::size_t i = 0; i < part_.block_count; ++i) {
        diag_lu_[i].solve_inplace(z.subspan(part_.begin(i), m));
    }
}

BlockSplitting split_dlu(const LinearSystem& system, const BlockPartition& part) {
    return BlockSplitting(system, part);
}

namespace {

// One Rayleigh-quotient power iteration pass on H_J^2 from a given start.
// Returns the estimate and whether the stagnation criterion was met.
struct PowerResult {
    double estimate = 0.0;
    bool converged = false;
};

PowerResult power_pass(const BlockSplitting& s, std::vector<double> v, double tol,
                       std::size_t max_iters) {
    const std::size_t n = v.size();
    double nv = kernels::nrm2(v);
    if (nv == 0.0) return {0.0, false};
    for (auto& c : v) c /= nv;

    auto apply_hj = [&](const std::vector<double>& in) {
        std::vector<double> out = s.apply_offdiag(in);
        s.solve_diag_inplace(out);
        for (auto& c : out) c = -c;
        return out;
    };

    double est = 0.0;
    double prev = -1.0;
    int stable = 0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        std::vector<double> w = apply_hj(apply_hj(v));
        const double rayleigh = kernels::dot(std::span<const double>(v),
                                             std::span<const double>(w));
        const double nw = kernels::nrm2(w);
        est = std::sqrt(std::max(rayleigh, 0.0));
        if (nw <= 1e-300) return {0.0, true}; // operator (numerically) nilpotent
        if (std::abs(est - prev) <= 0.05 * tol * std::max(1.0, est)) {
            if (++stable >= 3) return {est, true};
        } else {
            stable = 0;
        }
        prev = est;
        for (std::size_t k = 0; k < n; ++k) v[k] = w[k] / nw;
    }
    return {est, false};
}

} // namespace

double jacobi_spectral_radius(const BlockSplitting& splitting, double tol,
                              std::size_t max_power_iters) {
    if (!(tol > 0.0)) throw std::invalid_argument("jacobi_spectral_radius: tol must be > 0");
    if (max_power_iters < 1)
        throw std::invalid_argument("jacobi_spectral_radius: max_power_iters must be >= 1");
    const std::size_t n = splitting.size();

    std::vector<double> ones(n, 1.0);
    PowerResult first = power_pass(splitting, std::move(ones), tol, max_power_iters);

    // restart from a seeded random vector; guards against a start vector
    // orthogonal to the dominant pair
    Rng rng(0x51e2d1a5u);
    std::vector<double> rnd(n);
    for (auto& c : rnd) c = 2.0 * rng.uniform01() - 1.0;
    PowerResult second = power_pass(splitting, std::move(rnd), tol, max_power_iters);

    const double best = std::max(first.estimate, second.estimate);
    if (!first.converged && !second.converged)
        throw NumericalFailureError(best,
                                    "jacobi_spectral_radius: power iteration stagnated");
    return best;
}

double optimal_omega(double rho_jacobi) {
    if (!(rho_jacobi >= 0.0) || rho_jacobi >= 1.0)
        throw std::invalid_argument("optimal_omega: requires 0 <= rho < 1");
    return 2.0 / (1.0 + std::sqrt(1.0 - rho_jacobi * rho_jacobi));
}

Matrix sor_iteration_matrix(const BlockSplitting& splitting, double omega) {
    if (!(omega > 0.0 && omega < 2.0))
        throw std::invalid_argument("sor_iteration_matrix: omega must lie in (0, 2)");
    const std::size_t n = splitting.size();
    if (n > 2000)
        throw CapacityError("sor_iteration_matrix: explicit matrix limited to N <= 2000");
    const std::size_t m = splitting.part().block_size;
    const std::size_t nb = splitting.part().block_count;
    const Matrix& a = splitting.system().a();

    // rhs = (1 - omega) D - omega U
    Matrix hsor(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t bi = r / m;
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t bj = c / m;
            if (bi == bj) {
                hsor(r, c) = (1.0 - omega) * a(r, c);
            } else if (bi < bj) {
                hsor(r, c) = -omega * a(r, c);
            }
        }
    }

    // block forward substitution with (D + omega L)
    for (std::size_t i = 0; i < nb; ++i) {
        const std::size_t r0 = splitting.part().begin(i);
        for (std::size_t j = 0; j < i; ++j) {
            const std::size_t c0 = splitting.part().begin(j);
            // rows r0..r0+m of the solution block get -omega * A_ij * Y_j
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t k = 0; k < m; ++k) {
                    const double f = omega * a(r0 + r, c0 + k);
                    if (f != 0.0)
                        kernels::axpy(-f, hsor.row(c0 + k), hsor.row(r0 + r));
                }
            }
        }
        splitting.diag_factor(i).solve_columns_inplace(hsor.data() + r0 * n, n, n);
    }
    return hsor;
}

ConvergenceCheck check_convergence(const BlockSplitting& splitting, double omega) {
    const double rho = spectral_radius_dense(sor_iteration_matrix(splitting, omega));
    return {rho, rho < 1.0 - 1e-12};
}

std::vector<double> block_sor_sweep(const BlockSplitting& splitting, double omega,
                                    std::span<const double> x_current,
                                    std::span<const double> b, BlockBackend& backend) {
    const std::size_t n = splitting.size();
    if (x_current.size() != n || b.size() != n)
        throw std::invalid_argument("block_sor_sweep: vector length mismatch");
    if (!(omega > 0.0 && omega < 2.0))
        throw std::invalid_argument("block_sor_sweep: omega must lie in (0, 2)");

    const std::size_t m = splitting.part().block_size;
    std::vector<double> x(x_current.begin(), x_current.end());
    std::vector<double> rhs(m);
    std::vector<double> diag_x(m);

    for (std::size_t i = 0; i < splitting.part().block_count; ++i) {
        const std::size_t r0 = splitting.part().begin(i);
        // A_ii x_i^old before x_i is overwritten
        const auto aii = splitting.block(i, i);
        kernels::matvec(aii.data, m, m, aii.stride, x.data() + r0, diag_x.data());
        for (std::size_t r = 0; r < m; ++r) {
            const double coupling = splitting.system().row_dot_outside(
                r0 + r, x, r0, r0 + m); // j<i entries already updated in x
            rhs[r] = omega * (b[r0 + r] - coupling) + (1.0 - omega) * diag_x[r];
        }
        std::vector<double> z;
        try {
            z = backend.solve_block(aii, rhs);
        } catch (const Error& e) {
            throw SweepError(i, "block_sor_sweep: backend '" + std::string(backend.name()) +
                                    "' failed on block " + std::to_string(i) + ": " +
                                    e.what());
        }
        if (z.size() != m)
            throw SweepError(i, "block_sor_sweep: backend returned wrong block size");
        std::copy(z.begin(), z.end(), x.begin() + long(r0));
    }
    return x;
}

SolveReport solve(const LinearSystem& system, const BlockPartition& part,
                  const SorConfig& config, BlockBackend& backend,
                  std::span<const double> x0) {
    if (!(config.omega > 0.0 && config.omega < 2.0))
        throw std::invalid_argument("solve: omega must lie in (0, 2)");
    if (config.max_iterations < 1)
        throw std::invalid_argument("solve: max_iterations must be >= 1");
    if (!(config.tolerance > 0.0))
        throw std::invalid_argument("solve: tolerance must be > 0");
    if (config.stopping_mode == StoppingMode::ReferenceError && !system.reference_solution())
        throw std::invalid_argument("solve: ReferenceError mode requires a reference solution");

    const std::size_t n = system.size();
    std::vector<double> x(n, 0.0);
    if (!x0.empty()) {
        if (x0.size() != n) throw std::invalid_argument("solve: x0 length mismatch");
        x.assign(x0.begin(), x0.end());
    }

    BlockSplitting splitting(system, part);
    const double bnorm = kernels::nrm2(system.b());

    SolveReport report;
    report.omega_used = config.omega;

    for (std::size_t it = 0; it < config.max_iterations; ++it) {
        x = block_sor_sweep(splitting, config.omega, x, system.b(), backend);
        report.backend_calls += part.block_count;

        double err;
        if (config.stopping_mode == StoppingMode::ReferenceError) {
            err = relative_error(x, *system.reference_solution());
        } else {
            std::vector<double> r = system.apply(x);
            for (std::size_t k = 0; k < n; ++k) r[k] -= system.b()[k];
            err = bnorm > 0.0 ? kernels::nrm2(r) / bnorm : kernels::nrm2(r);
        }
        report.error_trace.push_back(err);
        report.iterations_used = it + 1;
        if (err > 1e9)
            throw DivergenceError("solve: error " + std::to_string(err) + " at iteration " +
                                  std::to_string(it + 1) + " exceeds divergence guard");
        if (err <= config.tolerance) {
            report.converged = true;
            break;
        }
    }
    report.solution = std::move(x);
    return report;
}

double relative_error(std::span<const double> x_approx, std::span<const double> x_ref) {
    if (x_approx.size() != x_ref.size())
        throw std::invalid_argument("relative_error: length mismatch");
    const double ref_norm = kernels::nrm2(x_ref);
    if (ref_norm == 0.0)
        throw std::invalid_argument("relative_error: reference norm is zero");
    std::vector<double> d(x_approx.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = x_approx[i] - x_ref[i];
    return kernels::nrm2(d) / ref_norm;
}

} // namespace qsor
