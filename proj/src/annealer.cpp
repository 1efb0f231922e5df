#include "qsor/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "qsor/errors.hpp"
#include "qsor/kernels.hpp"
#include "qsor/rng.hpp"

namespace qsor {

SampleSet::SampleSet(std::vector<Sample> samples) : samples_(std::move(samples)) {
    std::sort(samples_.begin(), samples_.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.bits < b.bits;
    });
}

const Sample& SampleSet::best() const {
    if (samples_.empty()) throw Error("SampleSet: empty");
    return samples_.front();
}

namespace {

void validate(const AnnealConfig& cfg) {
    if (cfg.reads < 1) throw std::invalid_argument("AnnealConfig: reads must be >= 1");
    if (cfg.bits_per_variable < 1)
        throw std::invalid_argument("AnnealConfig: bits_per_variable must be >= 1");
    const double b0 = cfg.beta_initial.value_or(0.1);
    const double b1 = cfg.beta_final.value_or(10.0);
    if (!(b0 > 0.0) || !(b0 < b1))
        throw std::invalid_argument("AnnealConfig: need 0 < beta_initial < beta_final");
}

struct Read {
    BitString bits;
    double energy = 0.0;
};

Read run_read(const QuboProblem& problem, const Matrix& couplings, std::size_t sweeps,
              double beta0, double beta1, std::uint64_t stream_seed,
              const std::function<void(const BitString&, double)>& on_flip) {
    const std::size_t n = problem.variable_count();
    Rng rng(stream_seed);

    BitString state(n);
    for (std::size_t k = 0; k < n; ++k) state.set(k, rng.next_u64() & 1u);

    // field[v] = dE of setting q_v from 0 to 1 given the rest of the state
    std::vector<double> field(n);
    for (std::size_t v = 0; v < n; ++v) field[v] = problem.linear(v);
    for (std::size_t u = 0; u < n; ++u) {
        if (state.get(u)) kernels::axpy(1.0, couplings.row(u), field);
    }
    double energy = problem.energy(state);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    const double ratio = beta1 / beta0;
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
        const double frac = sweeps > 1 ? double(sweep) / double(sweeps - 1) : 1.0;
        const double beta = beta0 * std::pow(ratio, frac);
        rng.shuffle(order);
        for (std::size_t v : order) {
            const double delta = state.get(v) ? -field[v] : field[v];
            if (delta > 0.0 && rng.uniform01() >= std::exp(-beta * delta)) continue;
            const double dir = state.get(v) ? -1.0 : 1.0;
            state.flip(v);
            energy += delta;
            kernels::axpy(dir, couplings.row(v), field);
            if (on_flip) on_flip(state, energy);
        }
    }
    return {std::move(state), energy};
}

} // namespace

SampleSet simulated_anneal(const QuboProblem& problem, const AnnealConfig& config) {
    validate(config);
    const double beta0 = config.beta_initial.value_or(0.1);
    const double beta1 = config.beta_final.value_or(10.0);
    const Matrix couplings = problem.symmetric_couplings();

    // reads own independent generator streams, so parallel and serial
    // execution produce the same set; the debug hook forces serial order
    std::vector<Read> reads(config.reads);
    const std::size_t workers =
        config.debug_on_flip
            ? 1
            : std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()),
                                    config.reads);
    if (workers <= 1) {
        for (std::size_t r = 0; r < config.reads; ++r) {
            reads[r] = run_read(problem, couplings, config.sweeps, beta0, beta1,
                                mix_seed(config.seed, r), config.debug_on_flip);
        }
    } else {
        std::vector<std::future<void>> tasks;
        tasks.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            tasks.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t r = w; r < config.reads; r += workers) {
                    reads[r] = run_read(problem, couplings, config.sweeps, beta0, beta1,
                                        mix_seed(config.seed, r), nullptr);
                }
            }));
        }
        for (auto& t : tasks) t.get();
    }

    // aggregate identical states; report energies recomputed from scratch so
    // the set is exactly consistent with energy()
    std::sort(reads.begin(), reads.end(),
              [](const Read& a, const Read& b) { return a.bits < b.bits; });
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < reads.size();) {
        std::size_t j = i;
        while (j < reads.size() && reads[j].bits == reads[i].bits) ++j;
        samples.push_back(Sample{reads[i].bits, problem.energy(reads[i].bits), j - i});
        i = j;
    }
    return SampleSet(std::move(samples));
}

std::pair<double, double> suggested_beta_range(const QuboProblem& problem) {
    const std::size_t n = problem.variable_count();
    // hot end: the worst possible single-flip gets accepted about half the
    // time; cold end: a move at the coefficient granularity freezes hard
    double max_span = 0.0;
    double min_granule = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < n; ++v) {
        double span = std::abs(problem.linear(v));
        if (span > 0.0) min_granule = std::min(min_granule, span);
        for (std::size_t u = v + 1; u < n; ++u) {
            const double w = std::abs(problem.quad(v, u));
            if (w > 0.0) min_granule = std::min(min_granule, w);
        }
        for (std::size_t u = 0; u < n; ++u) {
            if (u == v) continue;
            span += std::abs(u < v ? problem.quad(u, v) : problem.quad(v, u));
        }
        max_span = std::max(max_span, span);
    }
    if (max_span == 0.0 || !std::isfinite(min_granule)) return {0.1, 10.0};
    const double hot = std::log(2.0) / max_span;
    double cold = std::log(1000.0) / min_granule;
    if (cold <= hot) cold = hot * 100.0;
    return {hot, cold};
}

std::vector<double> direct_solve(ConstMatrixView a_block, std::span<const double> rhs) {
    if (a_block.rows != a_block.cols || a_block.rows != rhs.size())
        throw std::invalid_argument("direct_solve: shape mismatch");
    LuFactors lu(a_block);
    return lu.solve(rhs);
}

std::vector<double> anneal_block_solve(ConstMatrixView a_block, std::span<const double> rhs,
                                       const AnnealConfig& config) {
    validate(config);
    FixedPointEncoding enc = config.encoding_override
                                 ? *config.encoding_override
                                 : default_encoding(a_block, rhs, config.bits_per_variable);
    enc.validate(a_block.rows);

    const QuboProblem problem = encode_linear_system(a_block, rhs, enc);
    AnnealConfig cfg = config;
    if (!cfg.beta_initial || !cfg.beta_final) {
        const auto [hot, cold] = suggested_beta_range(problem);
        cfg.beta_initial = hot;
        cfg.beta_final = cold;
    }
    const SampleSet set = simulated_anneal(problem, cfg);
    return decode(set.best().bits, enc);
}

std::vector<double> DirectBackend::solve_block(ConstMatrixView a_block,
                                               std::span<const double> rhs) {
    ++stats_.calls;
    stats_.last_variable_count = rhs.size();
    return direct_solve(a_block, rhs);
}

std::vector<double> AnnealBackend::solve_block(ConstMatrixView a_block,
                                               std::span<const double> rhs) {
    AnnealConfig call_cfg = config_;
    call_cfg.seed = mix_seed(config_.seed, stats_.calls);
    ++stats_.calls;

    FixedPointEncoding enc =
        call_cfg.encoding_override ? *call_cfg.encoding_override
                                   : default_encoding(a_block, rhs, call_cfg.bits_per_variable);
    enc.validate(a_block.rows);
    const QuboProblem problem = encode_linear_system(a_block, rhs, enc);
    if (!call_cfg.beta_initial || !call_cfg.beta_final) {
        const auto [hot, cold] = suggested_beta_range(problem);
        call_cfg.beta_initial = hot;
        call_cfg.beta_final = cold;
    }
    const SampleSet set = simulated_anneal(problem, call_cfg);

    stats_.samples_drawn += call_cfg.reads;
    stats_.last_energy = set.best().energy;
    stats_.has_energy = true;
    stats_.last_variable_count = problem.variable_count();
    return decode(set.best().bits, enc);
}

} // namespace qsor
