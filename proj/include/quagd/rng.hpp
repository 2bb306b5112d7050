#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace quagd {

/// SplitMix64 finalizer. Bijective 64-bit mixing; used to derive independent
/// stream seeds from (master seed, tags).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for the stream owned by `node` during outer optimization step
/// `outer_step`. Streams depend only on these three values, never on the
/// order in which nodes are visited.
constexpr std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t node,
                                    std::uint64_t outer_step) noexcept {
    return mix64(mix64(mix64(master_seed) ^ node) ^ (outer_step * 0xD1B54A32D192ED03ULL));
}

/// Purpose tags for streams that are not per-node protocol randomness.
enum class StreamTag : std::uint64_t {
    graph = 0x6772617068ULL,
    costs = 0x636f737473ULL,
    initial = 0x696e6974ULL,
};

constexpr std::uint64_t tagged_seed(std::uint64_t master_seed, StreamTag tag) noexcept {
    return mix64(mix64(master_seed) ^ static_cast<std::uint64_t>(tag));
}

/// Deterministic pseudorandom stream. The engine is std::mt19937_64, whose
/// output sequence is fixed by the standard; the draws below avoid the
/// implementation-defined std distributions so traces are identical across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::size_t uniform_index(std::size_t bound) {
        const auto b = static_cast<std::uint64_t>(bound);
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % b);
        std::uint64_t draw = engine_();
        while (draw >= limit) draw = engine_();
        return static_cast<std::size_t>(draw % b);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[uniform_index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace quagd
