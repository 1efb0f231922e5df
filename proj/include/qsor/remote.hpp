#pragma once

#include <chrono>
#include <string>

#include "qsor/annealer.hpp"

namespace qsor {

// POSTs the QUBO to `endpoint` /v1/sample as
//   {"qubo": "<text format>", "reads": n, "sweeps": n, "seed": n}
// and parses {"samples": [{"bits": "0101...", "energy": e, "count": k}]}.
// Every reported energy is re-evaluated locally; a mismatch beyond 1e-6 is
// rejected as an EnergyInconsistencyError.
SampleSet remote_sample(const std::string& endpoint, const QuboProblem& problem,
                        const AnnealConfig& config,
                        std::chrono::milliseconds timeout = std::chrono::seconds(30));

// Backend that delegates block sampling to a remote service and decodes the
// best returned read locally.
class RemoteBackend final : public BlockBackend {
public:
    RemoteBackend(std::string endpoint, AnnealConfig config,
                  std::chrono::milliseconds timeout = std::chrono::seconds(30))
        : endpoint_(std::move(endpoint)), config_(std::move(config)), timeout_(timeout) {}

    std::vector<double> solve_block(ConstMatrixView a_block,
                                    std::span<const double> rhs) override;
    const Stats& stats() const override { return stats_; }
    std::string_view name() const override { return "remote"; }

private:
    std::string endpoint_;
    AnnealConfig config_;
    std::chrono::milliseconds timeout_;
    Stats stats_;
};

// Maps one wire-protocol request body to a response body using the local
// sampler. Throws FormatError / std::exception on malformed requests.
std::string handle_sample_request(const std::string& request_json);

// Serves the wire protocol on host:port using the local sampler, blocking
// until stopped. Returns false if the port could not be bound.
bool serve_samples(const std::string& host, int port);

} // namespace qsor
