#include "qsor/io_formats.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "qsor/errors.hpp"

namespace qsor {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw FormatError("write failed for " + path.string());
}

double parse_double(const std::string& token, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || token.empty())
        throw FormatError(where + ": bad number '" + token + "'");
    return v;
}

long parse_long(const std::string& token, const std::string& where) {
    char* end = nullptr;
    const long v = std::strtol(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || token.empty())
        throw FormatError(where + ": bad integer '" + token + "'");
    return v;
}

EdgeSpec edge_from_json(const json& j, const std::string& field) {
    if (!j.is_object()) throw ConfigError(field, field + ": must be an object");
    const std::string kind = j.value("kind", "");
    EdgeSpec e;
    if (kind == "constant") {
        if (!j.contains("value") || !j["value"].is_number())
            throw ConfigError(field, field + ": constant edge needs a numeric 'value'");
        e.kind = EdgeSpec::Kind::Constant;
        e.value = j["value"].get<double>();
    } else if (kind == "ramp") {
        if (!j.contains("from") || !j.contains("to") || !j["from"].is_number() ||
            !j["to"].is_number())
            throw ConfigError(field, field + ": ramp edge needs numeric 'from' and 'to'");
        e.kind = EdgeSpec::Kind::Ramp;
        e.from = j["from"].get<double>();
        e.to = j["to"].get<double>();
    } else {
        throw ConfigError(field, field + ": kind must be 'constant' or 'ramp'");
    }
    return e;
}

json edge_to_json(const EdgeSpec& e) {
    if (e.kind == EdgeSpec::Kind::Constant) return json{{"kind", "constant"}, {"value", e.value}};
    return json{{"kind", "ramp"}, {"from", e.from}, {"to", e.to}};
}

template <typename T>
T require_uint(const json& j, const std::string& field, T min_value) {
    if (!j.contains(field) || !j[field].is_number_unsigned())
        throw ConfigError(field, field + ": must be a non-negative integer");
    const auto v = j[field].get<std::uint64_t>();
    if (v < min_value)
        throw ConfigError(field, field + ": must be at least " + std::to_string(min_value));
    return T(v);
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunConfig load_config(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports "parse error at line L, column C: ..."
        throw FormatError("config " + path.string() + ": " + e.what());
    }

    if (!j.contains("version") || j["version"] != 1)
        throw ConfigError("version", "version: must be 1");

    RunConfig c;
    const json& grid = j.contains("grid") ? j["grid"] : json::object();
    c.n = require_uint<std::size_t>(grid, "n", 1);
    c.m = require_uint<std::size_t>(grid, "m", 1);
    if (!grid.contains("side_length") || !grid["side_length"].is_number() ||
        !(grid["side_length"].get<double>() > 0.0))
        throw ConfigError("side_length", "side_length: must be a positive number");
    c.side_length = grid["side_length"].get<double>();

    if (!j.contains("boundary") || !j["boundary"].is_object())
        throw ConfigError("boundary", "boundary: must be an object with four edges");
    const json& bc = j["boundary"];
    c.bottom = edge_from_json(bc.value("bottom", json()), "boundary.bottom");
    c.top = edge_from_json(bc.value("top", json()), "boundary.top");
    c.left = edge_from_json(bc.value("left", json()), "boundary.left");
    c.right = edge_from_json(bc.value("right", json()), "boundary.right");

    c.blocks = require_uint<std::size_t>(j, "blocks", 1);

    if (!j.contains("omega")) throw ConfigError("omega", "omega: required ('optimal' or a number)");
    if (j["omega"].is_string()) {
        if (j["omega"] != "optimal")
            throw ConfigError("omega", "omega: string form must be 'optimal'");
        c.omega = std::nullopt;
    } else if (j["omega"].is_number()) {
        const double w = j["omega"].get<double>();
        if (!(w > 0.0 && w < 2.0)) throw ConfigError("omega", "omega: must lie in (0, 2)");
        c.omega = w;
    } else {
        throw ConfigError("omega", "omega: must be 'optimal' or a number");
    }

    c.bits = require_uint<std::size_t>(j, "bits", 1);

    const std::string backend = j.value("backend", "");
    if (backend == "direct")
        c.backend = BackendKind::Direct;
    else if (backend == "anneal")
        c.backend = BackendKind::Anneal;
    else if (backend == "remote")
        c.backend = BackendKind::Remote;
    else
        throw ConfigError("backend", "backend: must be 'direct', 'anneal' or 'remote'");
    if (c.backend == BackendKind::Remote) {
        c.endpoint = j.value("endpoint", "");
        if (c.endpoint.empty())
            throw ConfigError("endpoint", "endpoint: required for the remote backend");
    }

    if (!j.contains("tolerance") || !j["tolerance"].is_number() ||
        !(j["tolerance"].get<double>() > 0.0))
        throw ConfigError("tolerance", "tolerance: must be a positive number");
    c.tolerance = j["tolerance"].get<double>();

    c.max_iterations = require_uint<std::size_t>(j, "max_iterations", 1);

    const std::string stopping = j.value("stopping", "");
    if (stopping == "reference")
        c.stopping = StoppingMode::ReferenceError;
    else if (stopping == "residual")
        c.stopping = StoppingMode::ResidualNorm;
    else
        throw ConfigError("stopping", "stopping: must be 'reference' or 'residual'");

    c.seed = require_uint<std::uint64_t>(j, "seed", 0);

    if (!j.contains("out_dir") || !j["out_dir"].is_string())
        throw ConfigError("out_dir", "out_dir: must be a string");
    c.out_dir = j["out_dir"].get<std::string>();
    return c;
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
    json j;
    j["version"] = 1;
    j["grid"] = {{"n", config.n}, {"m", config.m}, {"side_length", config.side_length}};
    j["boundary"] = {{"bottom", edge_to_json(config.bottom)},
                     {"top", edge_to_json(config.top)},
                     {"left", edge_to_json(config.left)},
                     {"right", edge_to_json(config.right)}};
    j["blocks"] = config.blocks;
    if (config.omega)
        j["omega"] = *config.omega;
    else
        j["omega"] = "optimal";
    j["bits"] = config.bits;
    switch (config.backend) {
    case BackendKind::Direct: j["backend"] = "direct"; break;
    case BackendKind::Anneal: j["backend"] = "anneal"; break;
    case BackendKind::Remote: j["backend"] = "remote"; break;
    }
    if (config.backend == BackendKind::Remote) j["endpoint"] = config.endpoint;
    j["tolerance"] = config.tolerance;
    j["max_iterations"] = config.max_iterations;
    j["stopping"] = config.stopping == StoppingMode::ReferenceError ? "reference" : "residual";
    j["seed"] = config.seed;
    j["out_dir"] = config.out_dir;
    write_file(path, j.dump(2) + "\n");
}

BoundaryConditions make_boundary_conditions(const RunConfig& config) {
    const double length = config.side_length;
    auto evaluator = [length](EdgeSpec e) {
        return [e, length](double t) {
            if (e.kind == EdgeSpec::Kind::Constant) return e.value;
            return e.from + (e.to - e.from) * t / length;
        };
    };
    return BoundaryConditions{evaluator(config.bottom), evaluator(config.top),
                              evaluator(config.left), evaluator(config.right)};
}

void write_system(const LinearSystem& system, const std::filesystem::path& path) {
    const auto& sp = system.sparse();
    std::ostringstream out;
    out << system.size() << ' ' << sp.val.size() << '\n';
    for (std::size_t r = 0; r < system.size(); ++r) {
        for (std::size_t k = sp.ptr[r]; k < sp.ptr[r + 1]; ++k) {
            out << r << ' ' << sp.col[k] << ' ' << format_double(sp.val[k]) << '\n';
        }
    }
    for (double v : system.b()) out << format_double(v) << '\n';
    write_file(path, out.str());
}

LinearSystem read_system(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path.string() + ": malformed header (empty file)");
    std::istringstream header(line);
    long n = 0, nnz = 0;
    if (!(header >> n >> nnz) || n < 1 || nnz < 0)
        throw FormatError(path.string() + ": malformed header '" + line + "'");

    const std::size_t dim = std::size_t(n);
    Matrix a(dim, dim);
    std::vector<bool> seen(dim * dim, false);
    for (long k = 0; k < nnz; ++k) {
        if (!std::getline(in, line))
            throw FormatError(path.string() + ": expected " + std::to_string(nnz) +
                              " entries, file ended after " + std::to_string(k));
        std::istringstream ls(line);
        std::string rt, ct, vt;
        if (!(ls >> rt >> ct >> vt))
            throw FormatError(path.string() + ": malformed entry '" + line + "'");
        const long r = parse_long(rt, path.string());
        const long c = parse_long(ct, path.string());
        if (r < 0 || r >= n || c < 0 || c >= n)
            throw FormatError(path.string() + ": index (" + rt + ", " + ct +
                              ") out of bounds for N=" + std::to_string(n));
        const std::size_t flat = std::size_t(r) * dim + std::size_t(c);
        if (seen[flat])
            throw FormatError(path.string() + ": duplicate entry at (" + rt + ", " + ct + ")");
        seen[flat] = true;
        a(std::size_t(r), std::size_t(c)) = parse_double(vt, path.string());
    }
    std::vector<double> b(dim);
    for (long k = 0; k < n; ++k) {
        if (!std::getline(in, line))
            throw FormatError(path.string() + ": rhs ended after " + std::to_string(k) +
                              " of " + std::to_string(n) + " values");
        b[std::size_t(k)] = parse_double(line, path.string());
    }
    return LinearSystem(std::move(a), std::move(b));
}

std::string qubo_to_text(const QuboProblem& problem) {
    std::ostringstream out;
    out << "vars " << problem.variable_count() << " offset " << format_double(problem.offset())
        << '\n';
    for (std::size_t u = 0; u < problem.variable_count(); ++u) {
        if (problem.linear(u) != 0.0)
            out << "lin " << u << ' ' << format_double(problem.linear(u)) << '\n';
    }
    problem.for_each_quad([&](std::size_t u, std::size_t v, double w) {
        out << "quad " << u << ' ' << v << ' ' << format_double(w) << '\n';
    });
    return out.str();
}

QuboProblem qubo_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("qubo text: empty input");
    std::istringstream header(line);
    std::string kw1, kw2, nt, ot;
    if (!(header >> kw1 >> nt >> kw2 >> ot) || kw1 != "vars" || kw2 != "offset")
        throw FormatError("qubo text: malformed header '" + line + "'");
    const long n = parse_long(nt, "qubo header");
    if (n < 0) throw FormatError("qubo text: negative variable count");
    const double offset = parse_double(ot, "qubo header");

    std::vector<double> linear(std::size_t(n), 0.0);
    std::vector<double> quad(std::size_t(n) * std::size_t(n), 0.0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "lin") {
            std::string it, vt;
            if (!(ls >> it >> vt)) throw FormatError("qubo text: malformed line '" + line + "'");
            const long i = parse_long(it, "qubo lin");
            if (i < 0 || i >= n) throw FormatError("qubo text: lin index out of range");
            linear[std::size_t(i)] = parse_double(vt, "qubo lin");
        } else if (tag == "quad") {
            std::string it, jt, vt;
            if (!(ls >> it >> jt >> vt))
                throw FormatError("qubo text: malformed line '" + line + "'");
            const long i = parse_long(it, "qubo quad");
            const long j = parse_long(jt, "qubo quad");
            if (i < 0 || j <= i || j >= n)
                throw FormatError("qubo text: quad indices must satisfy 0 <= i < j < n");
            quad[std::size_t(i) * std::size_t(n) + std::size_t(j)] = parse_double(vt, "qubo quad");
        } else {
            throw FormatError("qubo text: unknown tag '" + tag + "'");
        }
    }
    return QuboProblem(std::size_t(n), std::move(linear), std::move(quad), offset);
}

void write_qubo(const QuboProblem& problem, const std::filesystem::path& path) {
    write_file(path, qubo_to_text(problem));
}

QuboProblem read_qubo(const std::filesystem::path& path) {
    return qubo_from_text(read_file(path));
}

void write_trace_csv(const SolveReport& report, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "iteration,relative_error\n";
    for (std::size_t i = 0; i < report.error_trace.size(); ++i)
        out << (i + 1) << ',' << format_double(report.error_trace[i]) << '\n';
    out << "# converged=" << (report.converged ? "true" : "false")
        << " omega=" << format_double(report.omega_used)
        << " backend_calls=" << report.backend_calls << '\n';
    write_file(path, out.str());
}

void write_solution_csv(const Grid2D& grid, std::span<const double> solution,
                        const std::filesystem::path& path) {
    if (solution.size() != grid.interior_count())
        throw std::invalid_argument("write_solution_csv: solution length mismatch");
    std::ostringstream out;
    out << "i,j,x,y,u\n";
    for (std::size_t j = 1; j <= grid.m_interior(); ++j) {
        for (std::size_t i = 1; i <= grid.n_interior(); ++i) {
            out << i << ',' << j << ',' << format_double(grid.x_of(i)) << ','
                << format_double(grid.y_of(j)) << ','
                << format_double(solution[grid.index_of(i, j)]) << '\n';
        }
    }
    write_file(path, out.str());
}

void write_heatmap(const Grid2D& grid, std::span<const double> solution,
                   const std::filesystem::path& pgm_path,
                   const std::filesystem::path& csv_path) {
    if (solution.size() != grid.interior_count())
        throw std::invalid_argument("write_heatmap: solution length mismatch");

    double lo = solution[0], hi = solution[0];
    for (double v : solution) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;

    std::string body;
    body.reserve(grid.interior_count());
    // raster: top row first (largest y), left to right in x
    for (std::size_t j = grid.m_interior(); j >= 1; --j) {
        for (std::size_t i = 1; i <= grid.n_interior(); ++i) {
            const double v = solution[grid.index_of(i, j)];
            const int byte = span > 0.0 ? int(std::lround(255.0 * (v - lo) / span)) : 0;
            body.push_back(char(std::clamp(byte, 0, 255)));
        }
    }
    std::ostringstream out;
    out << "P5\n" << grid.n_interior() << ' ' << grid.m_interior() << "\n255\n" << body;
    write_file(pgm_path, out.str());

    write_solution_csv(grid, solution, csv_path);
}

void write_heatmap(const Grid2D& grid, std::span<const double> solution,
                   const std::filesystem::path& pgm_path) {
    std::filesystem::path csv = pgm_path;
    csv.replace_extension(".csv");
    write_heatmap(grid, solution, pgm_path, csv);
}

} // namespace qsor
