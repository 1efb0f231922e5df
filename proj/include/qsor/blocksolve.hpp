#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "qsor/linear_system.hpp"

namespace qsor {

// Contiguous equal-size block partition of [0, N).
struct BlockPartition {
    std::size_t block_count = 0;
    std::size_t block_size = 0;

    std::size_t begin(std::size_t block) const { return block * block_size; }
    std::size_t end(std::size_t block) const { return (block + 1) * block_size; }
    std::size_t total() const { return block_count * block_size; }
};

BlockPartition partition(const LinearSystem& system, std::size_t block_count);

// Block D/L/U decomposition of a partitioned system: D the diagonal blocks,
// L strictly below, U strictly above, D + L + U = A. Diagonal blocks are
// factored once at construction, which also performs the singularity check.
class BlockSplitting {
public:
    BlockSplitting(const LinearSystem& system, BlockPartition part);

    const LinearSystem& system() const { return *system_; }
    const BlockPartition& part() const { return part_; }
    std::size_t size() const { return system_->size(); }

    ConstMatrixView block(std::size_t i, std::size_t j) const;
    Matrix d_block(std::size_t i, std::size_t j) const;
    Matrix l_block(std::size_t i, std::size_t j) const;
    Matrix u_block(std::size_t i, std::size_t j) const;

    const LuFactors& diag_factor(std::size_t i) const { return diag_lu_[i]; }

    // E = D/omega + L and F = (1/omega - 1) D - U, materialized on demand.
    Matrix e_matrix(double omega) const;
    Matrix f_matrix(double omega) const;

    // (L + U) x via the sparse index (all columns outside the diagonal block).
    std::vector<double> apply_offdiag(std::span<const double> x) const;
    // z := D^{-1} z block by block, using the cached factorizations.
    void solve_diag_inplace(std::span<double> z) const;

private:
    const LinearSystem* system_;
    BlockPartition part_;
    std::vector<LuFactors> diag_lu_;
};

BlockSplitting split_dlu(const LinearSystem& system, const BlockPartition& part);

// rho(H_J) with H_J = -D^{-1}(L + U), estimated by power iteration on the
// squared operator (block Jacobi spectra of consistently ordered systems come
// in +/- pairs, which plain power iteration cannot separate). Matvecs solve
// against the factored diagonal blocks; D^{-1} is never formed.
double jacobi_spectral_radius(const BlockSplitting& splitting, double tol = 1e-8,
                              std::size_t max_power_iters = 20000);

// 2 / (1 + sqrt(1 - rho^2)); requires rho in [0, 1).
double optimal_omega(double rho_jacobi);

// Explicit SOR iteration matrix (D + omega L)^{-1} [(1 - omega) D - omega U],
// built by block forward substitution. Diagnostic only; guarded at N <= 2000.
Matrix sor_iteration_matrix(const BlockSplitting& splitting, double omega);

struct ConvergenceCheck {
    double spectral_radius = 0.0;
    bool converges = false;
};

ConvergenceCheck check_convergence(const BlockSplitting& splitting, double omega);

// Per-block subsystem solver: the seam where the exact solver, the local
// annealer, or a remote sampling service plugs in.
class BlockBackend {
public:
    struct Stats {
        std::uint64_t calls = 0;
        std::uint64_t samples_drawn = 0;
        double last_energy = 0.0;
        bool has_energy = false;
        std::size_t last_variable_count = 0;
    };

    virtual ~BlockBackend() = default;
    virtual std::vector<double> solve_block(ConstMatrixView a_block,
                                            std::span<const double> rhs) = 0;
    virtual const Stats& stats() const = 0;
    virtual std::string_view name() const = 0;
};

// One block SOR sweep: for each block i in ascending order the backend solves
//   A_ii z = omega (b_i - sum_{j<i} A_ij x_j^new - sum_{j>i} A_ij x_j^old)
//            + (1 - omega) A_ii x_i^old
// and x_i is replaced by z. omega = 1 reduces to block Gauss-Seidel.
//
// Derivation: the splitting A = E - F with E = D/omega + L, F = (1/omega - 1)D - U
// iterates sum_j E_ij x_j^new = sum_j F_ij x_j^old + b_i. Since E is block lower
// triangular, block row i reads
//   (1/omega) A_ii x_i^new + sum_{j<i} A_ij x_j^new
//     = (1/omega - 1) A_ii x_i^old - sum_{j>i} A_ij x_j^old + b_i,
// and multiplying by omega gives the A_ii z system above - the unique
// block-row solution of the iteration.
std::vector<double> block_sor_sweep(const BlockSplitting& splitting, double omega,
                                    std::span<const double> x_current,
                                    std::span<const double> b, BlockBackend& backend);

enum class StoppingMode { ReferenceError, ResidualNorm };

struct SorConfig {
    double omega = 1.0;
    std::size_t max_iterations = 100;
    double tolerance = 1e-8;
    StoppingMode stopping_mode = StoppingMode::ResidualNorm;
};

struct SolveReport {
    std::vector<double> solution;
    std::vector<double> error_trace;
    std::size_t iterations_used = 0;
    bool converged = false;
    std::uint64_t backend_calls = 0;
    double omega_used = 0.0;
};

SolveReport solve(const LinearSystem& system, const BlockPartition& part,
                  const SorConfig& config, BlockBackend& backend,
                  std::span<const double> x0 = {});

// ||x - ref||_2 / ||ref||_2
double relative_error(std::span<const double> x_approx, std::span<const double> x_ref);

} // namespace qsor
