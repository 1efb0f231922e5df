#include <doctest.h>

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "qsor/errors.hpp"
#include "qsor/io_formats.hpp"
#include "qsor/remote.hpp"
#include "support/oracles.hpp"

using namespace qsor;
using nlohmann::json;

namespace {

// in-process wire-protocol fixture; handler decides the response
class TestServer {
public:
    explicit TestServer(httplib::Server::Handler handler) {
        server_.Post("/v1/sample", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~TestServer() {
        server_.stop();
        thread_.join();
    }
    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

QuboProblem small_problem() {
    Rng rng(4097);
    const LinearSystem sys = oracle::random_dd_system(2, rng);
    return encode_linear_system(sys, default_encoding(sys, 3));
}

} // namespace

TEST_CASE("remote_sample: round-trips through a faithful sampling server") {
    const QuboProblem problem = small_problem();

    // the server runs the same sampler the local backend would
    TestServer server([](const httplib::Request& req, httplib::Response& res) {
        const json j = json::parse(req.body);
        const QuboProblem p = qubo_from_text(j.at("qubo").get<std::string>());
        AnnealConfig cfg;
        cfg.reads = j.at("reads").get<std::size_t>();
        cfg.sweeps = j.at("sweeps").get<std::size_t>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        const auto [hot, cold] = suggested_beta_range(p);
        cfg.beta_initial = hot;
        cfg.beta_final = cold;
        const SampleSet set = simulated_anneal(p, cfg);
        json samples = json::array();
        for (const Sample& s : set.samples())
            samples.push_back(
                {{"bits", s.bits.to_string()}, {"energy", s.energy}, {"count", s.count}});
        res.set_content(json{{"samples", samples}}.dump(), "application/json");
    });

    AnnealConfig cfg;
    cfg.reads = 10;
    cfg.sweeps = 200;
    cfg.seed = 77;
    const SampleSet remote = remote_sample(server.endpoint(), problem, cfg);

    AnnealConfig local_cfg = cfg;
    const auto [hot, cold] = suggested_beta_range(problem);
    local_cfg.beta_initial = hot;
    local_cfg.beta_final = cold;
    const SampleSet local = simulated_anneal(problem, local_cfg);
    CHECK(remote == local);
}

TEST_CASE("remote_sample: echo fixture ranks the canned optimum first") {
    const QuboProblem problem = small_problem();
    const auto best = brute_force_minimize(problem);
    const std::string bits = best.bits.to_string();
    const double energy = best.energy;

    TestServer server([bits, energy](const httplib::Request&, httplib::Response& res) {
        json samples = json::array();
        samples.push_back({{"bits", bits}, {"energy", energy}, {"count", 1}});
        // a worse sample with an honest energy must sort after the optimum
        res.set_content(json{{"samples", samples}}.dump(), "application/json");
    });

    const SampleSet set = remote_sample(server.endpoint(), problem, AnnealConfig{});
    REQUIRE(!set.empty());
    CHECK(set.best().bits.to_string() == bits);
    CHECK(set.best().energy == doctest::Approx(energy));
}

TEST_CASE("remote_sample: inconsistent reported energy is rejected") {
    const QuboProblem problem = small_problem();
    TestServer server([n = problem.variable_count()](const httplib::Request&,
                                                     httplib::Response& res) {
        json samples = json::array();
        samples.push_back({{"bits", std::string(n, '0')}, {"energy", 123.456}, {"count", 1}});
        res.set_content(json{{"samples", samples}}.dump(), "application/json");
    });
    CHECK_THROWS_AS(remote_sample(server.endpoint(), problem, AnnealConfig{}),
                    EnergyInconsistencyError);
}

TEST_CASE("remote_sample: malformed body and bad schema are distinct from transport") {
    const QuboProblem problem = small_problem();

    TestServer garbage([](const httplib::Request&, httplib::Response& res) {
        res.set_content("this is not json", "text/plain");
    });
    CHECK_THROWS_AS(remote_sample(garbage.endpoint(), problem, AnnealConfig{}),
                    MalformedResponseError);

    TestServer no_samples([](const httplib::Request&, httplib::Response& res) {
        res.set_content("{}", "application/json");
    });
    CHECK_THROWS_AS(remote_sample(no_samples.endpoint(), problem, AnnealConfig{}),
                    MalformedResponseError);

    TestServer wrong_bits([](const httplib::Request&, httplib::Response& res) {
        json samples = json::array();
        samples.push_back({{"bits", "01"}, {"energy", 0.0}, {"count", 1}});
        res.set_content(json{{"samples", samples}}.dump(), "application/json");
    });
    CHECK_THROWS_AS(remote_sample(wrong_bits.endpoint(), problem, AnnealConfig{}),
                    MalformedResponseError);
}

TEST_CASE("remote_sample: non-200 status is a protocol error") {
    const QuboProblem problem = small_problem();
    TestServer server([](const httplib::Request&, httplib::Response& res) {
        res.status = 503;
        res.set_content("overloaded", "text/plain");
    });
    CHECK_THROWS_AS(remote_sample(server.endpoint(), problem, AnnealConfig{}), ProtocolError);
}

TEST_CASE("remote_sample: unreachable endpoint fails fast with a connection error") {
    const QuboProblem problem = small_problem();
    const auto t0 = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(remote_sample("http://127.0.0.1:9", problem, AnnealConfig{},
                                  std::chrono::seconds(2)),
                    ConnectionError);
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(10));
}

TEST_CASE("RemoteBackend: block solve equals the local anneal backend") {
    // the production handler itself serves this fixture
    TestServer server([](const httplib::Request& req, httplib::Response& res) {
        res.set_content(handle_sample_request(req.body), "application/json");
    });

    Matrix c(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        c(i, i) = -4.0;
        if (i + 1 < 4) {
            c(i, i + 1) = 1.0;
            c(i + 1, i) = 1.0;
        }
    }
    const std::vector<double> rhs{-10.0, 4.0, 4.0, -10.0};

    AnnealConfig cfg;
    cfg.bits_per_variable = 5;
    cfg.seed = 123;
    cfg.sweeps = 300;
    cfg.reads = 10;

    RemoteBackend remote(server.endpoint(), cfg);
    AnnealBackend local(cfg);
    const auto zr = remote.solve_block(ConstMatrixView::of(c), rhs);
    const auto zl = local.solve_block(ConstMatrixView::of(c), rhs);
    CHECK(zr == zl);
    CHECK(remote.stats().calls == 1);
    CHECK(remote.stats().last_variable_count == 20);
}

TEST_CASE("remote_sample: stalled server trips the timeout variant") {
    const QuboProblem problem = small_problem();
    TestServer server([](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1500));
        res.set_content("{\"samples\":[]}", "application/json");
    });
    const auto t0 = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(remote_sample(server.endpoint(), problem, AnnealConfig{},
                                  std::chrono::milliseconds(300)),
                    TimeoutError);
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));
}
