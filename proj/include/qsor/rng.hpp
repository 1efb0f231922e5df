#pragma once

#include <cstdint>
#include <vector>

namespace qsor {

// Small deterministic generator (splitmix64). The standard distributions are
// implementation-defined, so all sampling goes through this to keep seeded
// runs identical across compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound), bound > 0.
    std::uint64_t uniform_below(std::uint64_t bound) {
        // rejection sampling to avoid modulo bias
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = std::size_t(uniform_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_;
};

// Derives an independent stream seed from (seed, stream index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL + stream * 0xd1342543de82ef95ULL));
    r.next_u64();
    return r.next_u64();
}

} // namespace qsor
