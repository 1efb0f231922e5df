#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qsor/linear_system.hpp"

namespace qsor {

// Fixed-point window for the binary expansion of each real unknown:
//   x_i = c_i * sum_{r=1..R} q_r^i 2^{-r} - d_i
// so decoded values lie in [-d_i, c_i (1 - 2^{-R}) - d_i].
struct FixedPointEncoding {
    std::size_t bits_per_variable = 0; // R
    std::vector<double> scale;         // c_i > 0
    std::vector<double> offset;        // d_i

    std::size_t variable_count() const { return scale.size() * bits_per_variable; }
    double value_min(std::size_t i) const { return -offset[i]; }
    double value_max(std::size_t i) const {
        return scale[i] * (1.0 - std::ldexp(1.0, -int(bits_per_variable))) - offset[i];
    }

    void validate(std::size_t system_size) const;
};

// Default symmetric window: W = smallest power of two >= 2 max_i |b_i / A_ii|
// (floored at 1), c = 2W, d = W, giving a decoded range of [-W, W) regardless
// of the sign pattern of the block solution.
FixedPointEncoding default_encoding(ConstMatrixView a, std::span<const double> b,
                                    std::size_t bits_per_variable);
FixedPointEncoding default_encoding(const LinearSystem& system,
                                    std::size_t bits_per_variable);

// Binary assignment, variable-major: all R bits of variable 0 first, bit r
// weighting 2^{-(r+1)} for r = 0..R-1 (most significant first).
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t n) : bits_(n, 0) {}
    static BitString from_string(const std::string& s);

    std::size_t size() const { return bits_.size(); }
    bool get(std::size_t k) const { return bits_[k] != 0; }
    void set(std::size_t k, bool v) { bits_[k] = v ? 1 : 0; }
    void flip(std::size_t k) { bits_[k] ^= 1; }

    std::string to_string() const;

    auto operator<=>(const BitString&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

// QUBO over n binary variables: energy(q) = sum_u lin_u q_u
// + sum_{u<v} quad_uv q_u q_v, plus a constant offset chosen so that
// energy(q) + offset equals the squared residual of the generating system.
// Quadratic terms are stored upper-triangular with combined symmetric weight;
// self-quadratic terms are folded into the linear coefficients (q^2 = q).
class QuboProblem {
public:
    QuboProblem(std::size_t variable_count, std::vector<double> linear,
                std::vector<double> quad_upper, double offset);

    std::size_t variable_count() const { return n_; }
    double linear(std::size_t u) const { return linear_[u]; }
    double quad(std::size_t u, std::size_t v) const; // requires u < v
    double offset() const { return offset_; }

    double energy(const BitString& bits) const;

    // Dense symmetric coupling matrix (zero diagonal) for samplers that
    // maintain per-variable fields incrementally.
    Matrix symmetric_couplings() const;

    // Largest |coefficient| over linear and quadratic terms.
    double coefficient_scale() const;

    template <typename Fn>
    void for_each_quad(Fn&& fn) const {
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = u + 1; v < n_; ++v)
                if (quad_[u * n_ + v] != 0.0) fn(u, v, quad_[u * n_ + v]);
    }

    bool operator==(const QuboProblem&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> linear_;
    std::vector<double> quad_; // n*n, only u < v used
    double offset_ = 0.0;
};

// Expands ||A decode(q) - b||^2 into QUBO form for an m x m system.
QuboProblem encode_linear_system(ConstMatrixView a, std::span<const double> b,
                                 const FixedPointEncoding& enc);
QuboProblem encode_linear_system(const LinearSystem& system, const FixedPointEncoding& enc);

// x_i = c_i sum_r bits(i, r) 2^{-r} - d_i
std::vector<double> decode(const BitString& bits, const FixedPointEncoding& enc);

double energy(const QuboProblem& problem, const BitString& bits);

struct MinimizeResult {
    BitString bits;
    double energy = 0.0;
};

// Exhaustive scan, guarded at 24 variables; ties break toward the
// lexicographically smallest bitstring.
MinimizeResult brute_force_minimize(const QuboProblem& problem);

} // namespace qsor
