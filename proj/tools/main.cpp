// qsor: block SOR solver for finite-difference heat systems with exact,
// simulated-annealing (QUBO) or remote sampling block backends.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsor/errors.hpp"
#include "qsor/experiments.hpp"
#include "qsor/remote.hpp"

namespace fs = std::filesystem;
using namespace qsor;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct Overrides {
    std::optional<double> omega;
    bool omega_optimal = false;
    std::optional<std::size_t> blocks;
    std::optional<std::size_t> bits;
    std::optional<std::string> backend;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> endpoint;
    std::optional<double> tolerance;
    std::optional<std::size_t> max_iterations;
    std::optional<std::string> stopping;
};

void add_override_flags(CLI::App& cmd, Overrides& ov) {
    cmd.add_option("--omega", ov.omega, "Over-relaxation parameter in (0, 2)");
    cmd.add_flag("--omega-optimal", ov.omega_optimal,
                 "Use the optimal omega from the Jacobi spectral radius");
    cmd.add_option("--blocks", ov.blocks, "Number of equal blocks");
    cmd.add_option("--bits", ov.bits, "Bits per unknown for the QUBO encoding");
    cmd.add_option("--backend", ov.backend, "Block backend: direct | anneal | remote");
    cmd.add_option("--seed", ov.seed, "Sampler seed");
    cmd.add_option("--out-dir", ov.out_dir, "Output directory");
    cmd.add_option("--endpoint", ov.endpoint, "Remote sampler endpoint URL");
    cmd.add_option("--tolerance", ov.tolerance, "Stopping tolerance");
    cmd.add_option("--max-iters", ov.max_iterations, "Iteration budget");
    cmd.add_option("--stopping", ov.stopping, "Stopping mode: reference | residual");
}

void apply_overrides(RunConfig& cfg, const Overrides& ov) {
    if (ov.omega && ov.omega_optimal)
        throw ConfigError("omega", "--omega and --omega-optimal are mutually exclusive");
    if (ov.omega) {
        if (!(*ov.omega > 0.0 && *ov.omega < 2.0))
            throw ConfigError("omega", "--omega must lie in (0, 2)");
        cfg.omega = *ov.omega;
    }
    if (ov.omega_optimal) cfg.omega = std::nullopt;
    if (ov.blocks) cfg.blocks = *ov.blocks;
    if (ov.bits) cfg.bits = *ov.bits;
    if (ov.backend) {
        if (*ov.backend == "direct")
            cfg.backend = BackendKind::Direct;
        else if (*ov.backend == "anneal")
            cfg.backend = BackendKind::Anneal;
        else if (*ov.backend == "remote")
            cfg.backend = BackendKind::Remote;
        else
            throw ConfigError("backend", "--backend must be direct, anneal or remote");
    }
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (ov.endpoint) cfg.endpoint = *ov.endpoint;
    if (ov.tolerance) {
        if (!(*ov.tolerance > 0.0))
            throw ConfigError("tolerance", "--tolerance must be positive");
        cfg.tolerance = *ov.tolerance;
    }
    if (ov.max_iterations) cfg.max_iterations = *ov.max_iterations;
    if (ov.stopping) {
        if (*ov.stopping == "reference")
            cfg.stopping = StoppingMode::ReferenceError;
        else if (*ov.stopping == "residual")
            cfg.stopping = StoppingMode::ResidualNorm;
        else
            throw ConfigError("stopping", "--stopping must be reference or residual");
    }
    if (cfg.backend == BackendKind::Remote && cfg.endpoint.empty())
        throw ConfigError("endpoint", "remote backend needs --endpoint or config endpoint");
}

RunConfig config_for(const std::optional<std::string>& config_path, const Overrides& ov,
                     const RunConfig& defaults = RunConfig{}) {
    RunConfig cfg = defaults;
    if (config_path) cfg = load_config(*config_path);
    apply_overrides(cfg, ov);
    return cfg;
}

int cmd_solve_heat(const std::optional<std::string>& config_path, const Overrides& ov) {
    const RunConfig cfg = config_for(config_path, ov);
    const HeatSetup setup = make_heat_setup(cfg);
    const HeatRunResult result = run_heat(cfg, setup);

    fs::create_directories(cfg.out_dir);
    const fs::path out(cfg.out_dir);
    write_heatmap(setup.grid, result.report.solution, out / "heatmap.pgm",
                  out / "solution.csv");
    write_trace_csv(result.report, out / "trace.csv");

    std::cout << "omega=" << format_double(result.omega)
              << " iterations=" << result.report.iterations_used << " final_error="
              << format_double(result.report.error_trace.empty()
                                   ? 0.0
                                   : result.report.error_trace.back())
              << " converged=" << (result.report.converged ? "true" : "false") << '\n';
    return result.report.converged ? kExitOk : kExitNotConverged;
}

int cmd_solve_system(const std::string& system_path,
                     const std::optional<std::string>& config_path, const Overrides& ov) {
    RunConfig defaults;
    defaults.blocks = 1;
    defaults.stopping = StoppingMode::ResidualNorm;
    defaults.tolerance = 1e-8;
    defaults.max_iterations = 1000;
    RunConfig cfg = config_for(config_path, ov, defaults);
    if (cfg.stopping == StoppingMode::ReferenceError)
        throw ConfigError("stopping",
                          "solve-system has no reference solution; use residual stopping");

    const LinearSystem system = read_system(system_path);
    const BlockPartition part = partition(system, cfg.blocks);
    const BlockSplitting splitting(system, part);
    const double omega = resolve_omega(splitting, cfg);

    SorConfig sor;
    sor.omega = omega;
    sor.max_iterations = cfg.max_iterations;
    sor.tolerance = cfg.tolerance;
    sor.stopping_mode = StoppingMode::ResidualNorm;

    auto backend = make_backend(cfg);
    SolveReport report;
    try {
        report = solve(system, part, sor, *backend);
    } catch (const DivergenceError& e) {
        std::cerr << "qsor: diverged: " << e.what() << '\n';
        return kExitNotConverged;
    }

    fs::create_directories(cfg.out_dir);
    const fs::path out(cfg.out_dir);
    write_trace_csv(report, out / "trace.csv");
    std::ofstream sol(out / "solution.csv");
    sol << "index,value\n";
    for (std::size_t i = 0; i < report.solution.size(); ++i)
        sol << i << ',' << format_double(report.solution[i]) << '\n';

    std::cout << "omega=" << format_double(omega)
              << " iterations=" << report.iterations_used
              << " converged=" << (report.converged ? "true" : "false") << '\n';
    return report.converged ? kExitOk : kExitNotConverged;
}

int cmd_analyze(const std::string& system_path, std::size_t blocks) {
    const LinearSystem system = read_system(system_path);
    const AnalyzeResult r = analyze_system(system, blocks);
    std::cout << "rho_jacobi=" << format_double(r.rho_jacobi) << '\n'
              << "omega_opt=" << format_double(r.omega_opt) << '\n'
              << "rho_sor_opt=" << format_double(r.rho_sor_opt) << '\n'
              << "rho_sor_gs=" << format_double(r.rho_sor_gs) << '\n'
              << "converges=" << (r.converges ? "true" : "false") << '\n';
    return r.converges ? kExitOk : kExitNotConverged;
}

int cmd_compare(const std::optional<std::string>& config_path, const Overrides& ov,
                std::vector<std::size_t> bit_counts) {
    const RunConfig cfg = config_for(config_path, ov);
    if (bit_counts.empty()) bit_counts = {3, 5, 7};
    const auto cells = run_compare(cfg, bit_counts);

    fs::create_directories(cfg.out_dir);
    const fs::path out(cfg.out_dir);
    bool sor_converged = false;
    for (const CompareCell& cell : cells) {
        write_trace_csv(cell.report, out / cell.file);
        std::cout << cell.label << ": iterations=" << cell.report.iterations_used
                  << " final_error=" << format_double(cell.report.error_trace.back())
                  << " converged=" << (cell.report.converged ? "true" : "false") << '\n';
        if (cell.bits == bit_counts.back() && cell.label.rfind("sor_", 0) == 0)
            sor_converged = cell.report.converged;
    }
    return sor_converged ? kExitOk : kExitNotConverged;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"block SOR heat solver with QUBO annealing backends"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    Overrides ov;

    auto* solve_heat = app.add_subcommand("solve-heat", "Solve the plate problem from a config");
    solve_heat->add_option("--config", config_path, "JSON run configuration");
    add_override_flags(*solve_heat, ov);

    std::string system_path;
    auto* solve_system = app.add_subcommand("solve-system", "Solve a stored linear system");
    solve_system->add_option("system", system_path, "coordinate-format system file")
        ->required();
    solve_system->add_option("--config", config_path, "JSON run configuration");
    add_override_flags(*solve_system, ov);

    std::size_t analyze_blocks = 1;
    auto* analyze = app.add_subcommand("analyze", "Spectral analysis of a stored system");
    analyze->add_option("system", system_path, "coordinate-format system file")->required();
    analyze->add_option("--blocks", analyze_blocks, "Number of equal blocks")->required();

    std::vector<std::size_t> bit_counts;
    auto* compare = app.add_subcommand("compare", "Paired GS/SOR traces across bit counts");
    compare->add_option("--config", config_path, "JSON run configuration");
    compare->add_option("--bits-list", bit_counts, "Bit counts to sweep (default 3 5 7)");
    add_override_flags(*compare, ov);

    std::string serve_host = "127.0.0.1";
    int serve_port = 8677;
    auto* serve = app.add_subcommand("serve", "Host the sampling wire protocol locally");
    serve->add_option("--host", serve_host, "Bind address");
    serve->add_option("--port", serve_port, "Port");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "qsor: " << e.what() << '\n';
        return kExitError;
    }

    try {
        if (solve_heat->parsed()) return cmd_solve_heat(config_path, ov);
        if (solve_system->parsed()) return cmd_solve_system(system_path, config_path, ov);
        if (analyze->parsed()) return cmd_analyze(system_path, analyze_blocks);
        if (compare->parsed()) return cmd_compare(config_path, ov, bit_counts);
        if (serve->parsed()) {
            std::cout << "listening on " << serve_host << ':' << serve_port << '\n';
            return serve_samples(serve_host, serve_port) ? kExitOk : kExitError;
        }
    } catch (const DivergenceError& e) {
        std::cerr << "qsor: diverged: " << e.what() << '\n';
        return kExitNotConverged;
    } catch (const std::exception& e) {
        std::cerr << "qsor: error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
