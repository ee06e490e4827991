#pragma once

#include <cstdint>
#include <random>

namespace spiked {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Reproducible random source identified by (seed, stream_id). Distinct stream
/// ids give independent substreams for parallel Monte Carlo.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
        std::uint64_t state = seed ^ (0x6a09e667f3bcc909ULL * (stream_id + 1));
        std::uint32_t words[8];
        for (int i = 0; i < 4; ++i) {
            const std::uint64_t v = detail::splitmix64(state);
            words[2 * i] = static_cast<std::uint32_t>(v);
            words[2 * i + 1] = static_cast<std::uint32_t>(v >> 32);
        }
        std::seed_seq seq(words, words + 8);
        engine_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    std::mt19937_64& engine() { return engine_; }

    double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }
    double normal() { return normal_(engine_); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace spiked
