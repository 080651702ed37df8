#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace slicesim::sim {

/// 64-bit FNV-1a over the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL);

/// One SplitMix64 output step applied to `x`.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for stream (`seed`, `label`, `index`): SplitMix64 chained over the
/// master seed, the FNV-1a hash of the label and the index. Pure function,
/// so it is identical on every platform.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

/// A named random stream. The generator is std::mt19937_64 (output sequence
/// fixed by the standard); uniform and exponential variates are produced by
/// this class rather than <random> distributions, whose algorithms are
/// implementation-defined. Each stochastic source owns its own stream so that
/// swapping the decision agent leaves the traffic draws untouched.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();

    /// Uniform on (0, 1].
    double uniform_open_low();

    /// Uniform integer in [0, n). Unbiased (rejection on the top bits).
    std::uint64_t uniform_index(std::uint64_t n);

    std::uint64_t seed() const { return seed_; }
    const std::string& label() const { return label_; }
    std::uint64_t index() const { return index_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::string label_;
    std::uint64_t index_;
};

/// Exp(rate) by inversion. Throws NonPositiveRate unless rate > 0.
double sample_exponential(RngStream& stream, double rate);

} // namespace slicesim::sim
