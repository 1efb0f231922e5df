#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qsor/blocksolve.hpp"
#include "qsor/qubo.hpp"

namespace qsor {

// Sampler knobs. Unset beta endpoints fall back to 0.1 -> 10 inside
// simulated_anneal; anneal_block_solve instead substitutes a range scaled to
// the encoded problem's coefficients (see suggested_beta_range).
struct AnnealConfig {
    std::size_t sweeps = 500;
    std::size_t reads = 25;
    std::optional<double> beta_initial;
    std::optional<double> beta_final;
    std::uint64_t seed = 0;
    std::size_t bits_per_variable = 7; // R
    std::optional<FixedPointEncoding> encoding_override;

    // Test hook: called after every accepted flip with the current state and
    // the incrementally tracked energy.
    std::function<void(const BitString&, double)> debug_on_flip;
};

struct Sample {
    BitString bits;
    double energy = 0.0;
    std::size_t count = 0;

    bool operator==(const Sample&) const = default;
};

// Aggregated reads, ascending by (energy, bits).
class SampleSet {
public:
    SampleSet() = default;
    explicit SampleSet(std::vector<Sample> samples);

    const std::vector<Sample>& samples() const { return samples_; }
    const Sample& best() const;
    bool empty() const { return samples_.empty(); }

    bool operator==(const SampleSet&) const = default;

private:
    std::vector<Sample> samples_;
};

// Metropolis single-bit-flip annealer with a geometric beta schedule and
// incrementally maintained flip energies. Reads use independent generator
// streams derived from (seed, read), so the result is reproducible and
// independent of read execution order.
SampleSet simulated_anneal(const QuboProblem& problem, const AnnealConfig& config);

// Schedule endpoints matched to the problem's energy scale: the hottest
// sweep accepts the worst possible single flip with probability ~1/2, the
// coldest rejects the weakest meaningful flip at ~e^-7.
std::pair<double, double> suggested_beta_range(const QuboProblem& problem);

// Dense LU solve with partial pivoting (the exact baseline backend).
std::vector<double> direct_solve(ConstMatrixView a_block, std::span<const double> rhs);

// Encode the block system, sample, decode the lowest-energy read.
std::vector<double> anneal_block_solve(ConstMatrixView a_block, std::span<const double> rhs,
                                       const AnnealConfig& config);

class DirectBackend final : public BlockBackend {
public:
    std::vector<double> solve_block(ConstMatrixView a_block,
                                    std::span<const double> rhs) override;
    const Stats& stats() const override { return stats_; }
    std::string_view name() const override { return "direct"; }

private:
    Stats stats_;
};

// Each solve_block call derives its own seed from (config seed, call index):
// repeated solves see fresh randomness but whole runs stay reproducible.
class AnnealBackend final : public BlockBackend {
public:
    explicit AnnealBackend(AnnealConfig config) : config_(std::move(config)) {}

    std::vector<double> solve_block(ConstMatrixView a_block,
                                    std::span<const double> rhs) override;
    const Stats& stats() const override { return stats_; }
    std::string_view name() const override { return "anneal"; }

    const AnnealConfig& config() const { return config_; }

private:
    AnnealConfig config_;
    Stats stats_;
};

} // namespace qsor
