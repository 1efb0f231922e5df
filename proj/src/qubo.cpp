#include "qsor/qubo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qsor/errors.hpp"
#include "qsor/kernels.hpp"

namespace qsor {

void FixedPointEncoding::validate(std::size_t system_size) const {
    if (bits_per_variable < 1)
        throw std::invalid_argument("FixedPointEncoding: need at least 1 bit per variable");
    if (scale.size() != system_size || offset.size() != system_size)
        throw std::invalid_argument("FixedPointEncoding: sized for " +
                                    std::to_string(scale.size()) + " variables, system has " +
                                    std::to_string(system_size));
    for (double c : scale)
        if (!(c > 0.0)) throw std::invalid_argument("FixedPointEncoding: scales must be > 0");
}

FixedPointEncoding default_encoding(ConstMatrixView a, std::span<const double> b,
                                    std::size_t bits_per_variable) {
    if (bits_per_variable < 1)
        throw std::invalid_argument("default_encoding: need at least 1 bit per variable");
    if (a.rows != a.cols || a.rows != b.size())
        throw std::invalid_argument("default_encoding: shape mismatch");

    double ratio = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double diag = a(i, i);
        if (diag == 0.0)
            throw std::invalid_argument("default_encoding: zero diagonal at row " +
                                        std::to_string(i));
        ratio = std::max(ratio, std::abs(b[i] / diag));
    }
    double window = 1.0;
    while (window < 2.0 * ratio) window *= 2.0;

    FixedPointEncoding enc;
    enc.bits_per_variable = bits_per_variable;
    enc.scale.assign(a.rows, 2.0 * window);
    enc.offset.assign(a.rows, window);
    return enc;
}

FixedPointEncoding default_encoding(const LinearSystem& system, std::size_t bits_per_variable) {
    return default_encoding(system.view(), system.b(), bits_per_variable);
}

BitString BitString::from_string(const std::string& s) {
    BitString b(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            b.set(i, true);
        else if (s[i] != '0')
            throw std::invalid_argument("BitString: invalid character '" +
                                        std::string(1, s[i]) + "'");
    }
    return b;
}

std::string BitString::to_string() const {
    std::string s(size(), '0');
    for (std::size_t i = 0; i < size(); ++i)
        if (get(i)) s[i] = '1';
    return s;
}

QuboProblem::QuboProblem(std::size_t variable_count, std::vector<double> linear,
                         std::vector<double> quad_upper, double offset)
    : n_(variable_count), linear_(std::move(linear)), quad_(std::move(quad_upper)),
      offset_(offset) {
    if (linear_.size() != n_ || quad_.size() != n_ * n_)
        throw std::invalid_argument("QuboProblem: coefficient arrays sized incorrectly");
    for (std::size_t u = 0; u < n_; ++u)
        for (std::size_t v = 0; v <= u; ++v)
            if (quad_[u * n_ + v] != 0.0)
                throw std::invalid_argument(
                    "QuboProblem: quadratic storage must be strictly upper triangular");
}

double QuboProblem::quad(std::size_t u, std::size_t v) const {
    if (u >= v) throw std::invalid_argument("QuboProblem::quad: requires u < v");
    return quad_[u * n_ + v];
}

double QuboProblem::energy(const BitString& bits) const {
    if (bits.size() != n_)
        throw std::invalid_argument("energy: bitstring length mismatch");
    double e = 0.0;
    for (std::size_t u = 0; u < n_; ++u) {
        if (!bits.get(u)) continue;
        e += linear_[u];
        for (std::size_t v = u + 1; v < n_; ++v)
            if (bits.get(v)) e += quad_[u * n_ + v];
    }
    return e;
}

Matrix QuboProblem::symmetric_couplings() const {
    Matrix q(n_, n_);
    for (std::size_t u = 0; u < n_; ++u) {
        for (std::size_t v = u + 1; v < n_; ++v) {
            const double w = quad_[u * n_ + v];
            q(u, v) = w;
            q(v, u) = w;
        }
    }
    return q;
}

double QuboProblem::coefficient_scale() const {
    double m = 0.0;
    for (double v : linear_) m = std::max(m, std::abs(v));
    for (std::size_t u = 0; u < n_; ++u)
        for (std::size_t v = u + 1; v < n_; ++v)
            m = std::max(m, std::abs(quad_[u * n_ + v]));
    return m;
}

QuboProblem encode_linear_system(ConstMatrixView a, std::span<const double> b,
                                 const FixedPointEncoding& enc) {
    const std::size_t m = a.rows;
    if (a.cols != m || b.size() != m)
        throw std::invalid_argument("encode_linear_system: shape mismatch");
    enc.validate(m);

    const std::size_t bits = enc.bits_per_variable;
    const std::size_t n = m * bits;

    // shifted rhs g = b + A d; residual in terms of s_i = sum_r q_r 2^{-r}:
    //   ||A x - b||^2 = sum_ij P_ij s_i s_j - 2 sum_i t_i s_i + ||g||^2
    // with P_ij = (A^T A)_ij c_i c_j and t_i = c_i (A^T g)_i.
    std::vector<double> g(b.begin(), b.end());
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i) g[k] += a(k, i) * enc.offset[i];

    Matrix p(m, m);
    std::vector<double> t(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double ata = 0.0;
            for (std::size_t k = 0; k < m; ++k) ata += a(k, i) * a(k, j);
            p(i, j) = ata * enc.scale[i] * enc.scale[j];
        }
        double atg = 0.0;
        for (std::size_t k = 0; k < m; ++k) atg += a(k, i) * g[k];
        t[i] = enc.scale[i] * atg;
    }
    const double offset = kernels::sumsq(g);

    std::vector<double> linear(n, 0.0);
    std::vector<double> quad(n * n, 0.0);

    auto weight = [](std::size_t r) { return std::ldexp(1.0, -int(r) - 1); }; // 2^{-(r+1)}

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t r = 0; r < bits; ++r) {
            const std::size_t u = i * bits + r;
            const double wr = weight(r);
            // self term P_ii (s_i)^2 diagonal piece folds in via q^2 = q
            linear[u] = wr * wr * p(i, i) - 2.0 * wr * t[i];
            for (std::size_t j = 0; j < m; ++j) {
                for (std::size_t s = 0; s < bits; ++s) {
                    const std::size_t v = j * bits + s;
                    if (v <= u) continue;
                    quad[u * n + v] += 2.0 * wr * weight(s) * p(i, j);
                }
            }
        }
    }
    return QuboProblem(n, std::move(linear), std::move(quad), offset);
}

QuboProblem encode_linear_system(const LinearSystem& system, const FixedPointEncoding& enc) {
    return encode_linear_system(system.view(), system.b(), enc);
}

std::vector<double> decode(const BitString& bits, const FixedPointEncoding& enc) {
    const std::size_t m = enc.scale.size();
    const std::size_t r_bits = enc.bits_per_variable;
    if (bits.size() != m * r_bits)
        throw std::invalid_argument("decode: bitstring length mismatch");
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t r = 0; r < r_bits; ++r)
            if (bits.get(i * r_bits + r)) s += std::ldexp(1.0, -int(r) - 1);
        x[i] = enc.scale[i] * s - enc.offset[i];
    }
    return x;
}

double energy(const QuboProblem& problem, const BitString& bits) {
    return problem.energy(bits);
}

MinimizeResult brute_force_minimize(const QuboProblem& problem) {
    const std::size_t n = problem.variable_count();
    if (n > 24)
        throw CapacityError("brute_force_minimize: " + std::to_string(n) +
                            " variables exceeds the 24-variable guard");
    MinimizeResult best;
    best.bits = BitString(n);
    best.energy = problem.energy(best.bits);

    BitString cand(n);
    const std::uint64_t total = std::uint64_t(1) << n;
    for (std::uint64_t word = 1; word < total; ++word) {
        for (std::size_t k = 0; k < n; ++k) cand.set(k, (word >> k) & 1u);
        const double e = problem.energy(cand);
        if (e < best.energy || (e == best.energy && cand < best.bits)) {
            best.energy = e;
            best.bits = cand;
        }
    }
    return best;
}

} // namespace qsor
