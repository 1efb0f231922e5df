#pragma once

#include <memory>

#include "qsor/annealer.hpp"
#include "qsor/io_formats.hpp"

namespace qsor {

struct HeatSetup {
    Grid2D grid;
    LinearSystem system;
};

// Builds the grid and assembles the interior system for a run. When the run
// monitors the reference error, the exact discrete solution (dense LU of the
// full system) is attached as the reference.
HeatSetup make_heat_setup(const RunConfig& config);

std::unique_ptr<BlockBackend> make_backend(const RunConfig& config);

// The configured omega, or the optimal formula fed by the power-iteration
// estimate of rho(H_J).
double resolve_omega(const BlockSplitting& splitting, const RunConfig& config);

struct HeatRunResult {
    SolveReport report;
    double omega = 0.0;
};

HeatRunResult run_heat(const RunConfig& config, const HeatSetup& setup);

struct AnalyzeResult {
    double rho_jacobi = 0.0;
    double omega_opt = 0.0;
    double rho_sor_opt = 0.0;
    double rho_sor_gs = 0.0;
    bool converges = false;
};

AnalyzeResult analyze_system(const LinearSystem& system, std::size_t blocks);

// One trace of the method comparison: the classic (direct backend) pair plus
// a hybrid (anneal backend) pair per requested bit count. Methods at the same
// bit count share one seed so the pairing is fair.
struct CompareCell {
    std::string label;   // e.g. "gs_R5", "sor_R5", "classic_gs", "classic_sor"
    std::string file;    // trace file name, e.g. "trace_sor_R5.csv"
    std::size_t bits = 0; // 0 for the classic cells
    SolveReport report;
};

std::vector<CompareCell> run_compare(const RunConfig& config,
                                     const std::vector<std::size_t>& bit_counts);

} // namespace qsor
