#include "qsor/remote.hpp"

#include <cmath>

#include <httplib.h>
#include <json.hpp>

#include "qsor/errors.hpp"
#include "qsor/io_formats.hpp"
#include "qsor/rng.hpp"

namespace qsor {

namespace {

using nlohmann::json;

SampleSet parse_sample_response(const std::string& body, const QuboProblem& problem) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw MalformedResponseError(std::string("remote_sample: response is not JSON: ") +
                                     e.what());
    }
    if (!j.contains("samples") || !j["samples"].is_array())
        throw MalformedResponseError("remote_sample: response lacks a 'samples' array");

    std::vector<Sample> samples;
    for (const json& s : j["samples"]) {
        if (!s.is_object() || !s.contains("bits") || !s["bits"].is_string() ||
            !s.contains("energy") || !s["energy"].is_number())
            throw MalformedResponseError("remote_sample: malformed sample entry");
        Sample sample;
        try {
            sample.bits = BitString::from_string(s["bits"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw MalformedResponseError(std::string("remote_sample: ") + e.what());
        }
        if (sample.bits.size() != problem.variable_count())
            throw MalformedResponseError("remote_sample: sample has wrong bit count");
        sample.energy = s["energy"].get<double>();
        sample.count = s.value("count", std::size_t(1));

        const double local = problem.energy(sample.bits);
        if (std::abs(local - sample.energy) > 1e-6)
            throw EnergyInconsistencyError(
                "remote_sample: reported energy " + format_double(sample.energy) +
                " differs from local evaluation " + format_double(local));
        samples.push_back(std::move(sample));
    }
    if (samples.empty()) throw MalformedResponseError("remote_sample: empty sample set");
    return SampleSet(std::move(samples));
}

} // namespace

SampleSet remote_sample(const std::string& endpoint, const QuboProblem& problem,
                        const AnnealConfig& config, std::chrono::milliseconds timeout) {
    httplib::Client client(endpoint);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    json request = {{"qubo", qubo_to_text(problem)},
                    {"reads", config.reads},
                    {"sweeps", config.sweeps},
                    {"seed", config.seed}};
    auto res = client.Post("/v1/sample", request.dump(), "application/json");
    if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
            err == httplib::Error::Write)
            throw TimeoutError("remote_sample: request to " + endpoint + " timed out (" +
                               httplib::to_string(err) + ")");
        throw ConnectionError("remote_sample: cannot reach " + endpoint + " (" +
                              httplib::to_string(err) + ")");
    }
    if (res->status != 200)
        throw ProtocolError("remote_sample: " + endpoint + " answered HTTP " +
                            std::to_string(res->status));
    return parse_sample_response(res->body, problem);
}

std::vector<double> RemoteBackend::solve_block(ConstMatrixView a_block,
                                               std::span<const double> rhs) {
    AnnealConfig call_cfg = config_;
    call_cfg.seed = mix_seed(config_.seed, stats_.calls);
    ++stats_.calls;

    FixedPointEncoding enc =
        call_cfg.encoding_override ? *call_cfg.encoding_override
                                   : default_encoding(a_block, rhs, call_cfg.bits_per_variable);
    enc.validate(a_block.rows);
    const QuboProblem problem = encode_linear_system(a_block, rhs, enc);
    const SampleSet set = remote_sample(endpoint_, problem, call_cfg, timeout_);

    stats_.samples_drawn += call_cfg.reads;
    stats_.last_energy = set.best().energy;
    stats_.has_energy = true;
    stats_.last_variable_count = problem.variable_count();
    return decode(set.best().bits, enc);
}

std::string handle_sample_request(const std::string& request_json) {
    const json j = json::parse(request_json);
    const QuboProblem problem = qubo_from_text(j.at("qubo").get<std::string>());
    AnnealConfig cfg;
    cfg.reads = j.value("reads", std::size_t(25));
    cfg.sweeps = j.value("sweeps", std::size_t(500));
    cfg.seed = j.value("seed", std::uint64_t(0));
    // schedule endpoints are a server-side concern; the wire carries only
    // reads, sweeps and seed
    const auto [hot, cold] = suggested_beta_range(problem);
    cfg.beta_initial = hot;
    cfg.beta_final = cold;
    const SampleSet set = simulated_anneal(problem, cfg);

    json samples = json::array();
    for (const Sample& s : set.samples()) {
        samples.push_back(
            {{"bits", s.bits.to_string()}, {"energy", s.energy}, {"count", s.count}});
    }
    return json{{"samples", samples}}.dump();
}

bool serve_samples(const std::string& host, int port) {
    httplib::Server server;
    server.Post("/v1/sample", [](const httplib::Request& req, httplib::Response& res) {
        try {
            res.set_content(handle_sample_request(req.body), "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        }
    });
    return server.listen(host, port);
}

} // namespace qsor
