#pragma once

#include <filesystem>
#include <string>

#include "qsor/blocksolve.hpp"
#include "qsor/grid.hpp"
#include "qsor/qubo.hpp"

namespace qsor {

// One edge of the plate: a fixed temperature or a linear ramp along the edge.
struct EdgeSpec {
    enum class Kind { Constant, Ramp };
    Kind kind = Kind::Constant;
    double value = 0.0; // Constant
    double from = 0.0;  // Ramp endpoints
    double to = 0.0;

    bool operator==(const EdgeSpec&) const = default;
};

enum class BackendKind { Direct, Anneal, Remote };

// Everything a run needs, loadable from JSON (schema version 1).
struct RunConfig {
    std::size_t n = 9;
    std::size_t m = 9;
    double side_length = 1.0;
    EdgeSpec bottom, top, left, right;
    std::size_t blocks = 9;
    std::optional<double> omega; // unset = use the optimal formula
    std::size_t bits = 7;
    BackendKind backend = BackendKind::Direct;
    std::string endpoint;        // remote backend only
    double tolerance = 0.08;
    std::size_t max_iterations = 50;
    StoppingMode stopping = StoppingMode::ReferenceError;
    std::uint64_t seed = 0;
    std::string out_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

// Edge specs evaluated along [0, side_length].
BoundaryConditions make_boundary_conditions(const RunConfig& config);

// Plain-text coordinate format: "N nnz" header, one "row col value" triple
// per nonzero (0-based), then N lines of b. Round-trips exactly at 17
// significant digits. Duplicate entries are rejected.
void write_system(const LinearSystem& system, const std::filesystem::path& path);
LinearSystem read_system(const std::filesystem::path& path);

// QUBO text format: "vars <n> offset <v>", "lin <idx> <v>" lines, then
// "quad <i> <j> <v>" lines with i < j.
std::string qubo_to_text(const QuboProblem& problem);
QuboProblem qubo_from_text(const std::string& text);
void write_qubo(const QuboProblem& problem, const std::filesystem::path& path);
QuboProblem read_qubo(const std::filesystem::path& path);

// "iteration,relative_error" rows plus a "# converged=... omega=...
// backend_calls=..." footer.
void write_trace_csv(const SolveReport& report, const std::filesystem::path& path);

// "i,j,x,y,u" per interior point.
void write_solution_csv(const Grid2D& grid, std::span<const double> solution,
                        const std::filesystem::path& path);

// 8-bit binary PGM of the interior points with linear min-max scaling,
// rasterized top row = largest y regardless of solver numbering, plus the
// CSV companion. A constant field maps to all-zero pixels.
void write_heatmap(const Grid2D& grid, std::span<const double> solution,
                   const std::filesystem::path& pgm_path,
                   const std::filesystem::path& csv_path);
void write_heatmap(const Grid2D& grid, std::span<const double> solution,
                   const std::filesystem::path& pgm_path);

// shortest decimal form that parses back to the same double (up to 17
// significant digits)
std::string format_double(double v);

} // namespace qsor
