#include "qsor/experiments.hpp"

#include <string>

#include "qsor/remote.hpp"
#include "qsor/rng.hpp"

namespace qsor {

HeatSetup make_heat_setup(const RunConfig& config) {
    Grid2D grid = build_grid(config.n, config.m, config.side_length,
                             make_boundary_conditions(config), Numbering::RowMajor);
    LinearSystem system = assemble_system(grid);
    if (config.stopping == StoppingMode::ReferenceError) {
        LuFactors lu(system.view());
        system.set_reference_solution(lu.solve(system.b()));
    }
    return HeatSetup{std::move(grid), std::move(system)};
}

std::unique_ptr<BlockBackend> make_backend(const RunConfig& config) {
    switch (config.backend) {
    case BackendKind::Direct:
        return std::make_unique<DirectBackend>();
    case BackendKind::Anneal: {
        AnnealConfig cfg;
        cfg.seed = config.seed;
        cfg.bits_per_variable = config.bits;
        // block subsystems run tens of binary variables; the stock 500-sweep
        // budget leaves them a few quantization steps short of optimal
        cfg.sweeps = 2000;
        return std::make_unique<AnnealBackend>(cfg);
    }
    case BackendKind::Remote: {
        AnnealConfig cfg;
        cfg.seed = config.seed;
        cfg.bits_per_variable = config.bits;
        cfg.sweeps = 2000;
        return std::make_unique<RemoteBackend>(config.endpoint, cfg);
    }
    }
    throw std::invalid_argument("make_backend: unknown backend");
}

double resolve_omega(const BlockSplitting& splitting, const RunConfig& config) {
    if (config.omega) return *config.omega;
    return optimal_omega(jacobi_spectral_radius(splitting));
}

HeatRunResult run_heat(const RunConfig& config, const HeatSetup& setup) {
    const BlockPartition part = partition(setup.system, config.blocks);
    const BlockSplitting splitting(setup.system, part);
    const double omega = resolve_omega(splitting, config);

    SorConfig sor;
    sor.omega = omega;
    sor.max_iterations = config.max_iterations;
    sor.tolerance = config.tolerance;
    sor.stopping_mode = config.stopping;

    auto backend = make_backend(config);
    SolveReport report = solve(setup.system, part, sor, *backend);
    return {std::move(report), omega};
}

AnalyzeResult analyze_system(const LinearSystem& system, std::size_t blocks) {
    const BlockPartition part = partition(system, blocks);
    const BlockSplitting splitting(system, part);

    AnalyzeResult r;
    r.rho_jacobi = jacobi_spectral_radius(splitting);
    r.omega_opt = optimal_omega(r.rho_jacobi);
    const ConvergenceCheck at_opt = check_convergence(splitting, r.omega_opt);
    r.rho_sor_opt = at_opt.spectral_radius;
    r.rho_sor_gs = check_convergence(splitting, 1.0).spectral_radius;
    r.converges = at_opt.converges;
    return r;
}

std::vector<CompareCell> run_compare(const RunConfig& config,
                                     const std::vector<std::size_t>& bit_counts) {
    HeatSetup setup = make_heat_setup(config);
    const BlockPartition part = partition(setup.system, config.blocks);
    const BlockSplitting splitting(setup.system, part);
    const double omega_sor = resolve_omega(splitting, config);

    auto run_cell = [&](double omega, BlockBackend& backend) {
        SorConfig sor;
        sor.omega = omega;
        sor.max_iterations = config.max_iterations;
        sor.tolerance = config.tolerance;
        sor.stopping_mode = config.stopping;
        return solve(setup.system, part, sor, backend);
    };

    std::vector<CompareCell> cells;

    {
        DirectBackend gs;
        cells.push_back({"classic_gs", "trace_gs.csv", 0, run_cell(1.0, gs)});
        DirectBackend sor;
        cells.push_back({"classic_sor", "trace_sor.csv", 0, run_cell(omega_sor, sor)});
    }

    for (std::size_t bits : bit_counts) {
        // one seed per bit count, shared by both methods of the pair
        const std::uint64_t cell_seed = mix_seed(config.seed, bits);
        AnnealConfig anneal;
        anneal.bits_per_variable = bits;

        anneal.seed = cell_seed;
        AnnealBackend gs_backend(anneal);
        cells.push_back({"gs_R" + std::to_string(bits),
                         "trace_gs_R" + std::to_string(bits) + ".csv", bits,
                         run_cell(1.0, gs_backend)});

        anneal.seed = cell_seed;
        AnnealBackend sor_backend(anneal);
        cells.push_back({"sor_R" + std::to_string(bits),
                         "trace_sor_R" + std::to_string(bits) + ".csv", bits,
                         run_cell(omega_sor, sor_backend)});
    }
    return cells;
}

} // namespace qsor
