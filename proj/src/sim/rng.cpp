#include "slicesim/sim/rng.hpp"

#include <cmath>

#include "slicesim/core/errors.hpp"

namespace slicesim::sim {

std::uint64_t fnv1a64(std::string_view text, std::uint64_t h) {
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ fnv1a64(label));
    h = splitmix64(h ^ index);
    return h;
}

RngStream::RngStream(std::uint64_t seed, std::string_view label, std::uint64_t index)
    : engine_(derive_seed(seed, label, index)), seed_(seed), label_(label), index_(index) {}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open_low() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
    if (n == 0) throw InvalidParams("uniform_index: empty range");
    // Largest multiple of n representable; reject draws above it.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x > limit);
    return x % n;
}

double sample_exponential(RngStream& stream, double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw NonPositiveRate("sample_exponential: rate must be positive and finite");
    return -std::log(stream.uniform_open_low()) / rate;
}

} // namespace slicesim::sim
