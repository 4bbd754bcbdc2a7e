#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace nettask {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Key for a named substream. Every random decision in the toolkit is drawn
// from a stream keyed by (run seed, tag, a, b), so results never depend on
// evaluation order or worker count.
constexpr std::uint64_t substream_key(std::uint64_t seed, std::string_view tag,
                                      std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t k = mix64(seed ^ fnv1a(tag));
    k = mix64(k ^ a);
    return mix64(k ^ (b * 0xd1b54a32d192ed03ULL));
}

class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t key) : state_(key) {}
    Rng(std::uint64_t seed, std::string_view tag, std::uint64_t a = 0, std::uint64_t b = 0)
        : state_(substream_key(seed, tag, a, b)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

    double normal() {
        // Box-Muller; one value per call keeps the stream stateless beyond the counter.
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    std::uint64_t state_;
};

// Stateless uniform draw for a single keyed event.
inline double keyed_uniform(std::uint64_t seed, std::string_view tag, std::uint64_t a,
                            std::uint64_t b = 0) {
    return static_cast<double>(substream_key(seed, tag, a, b) >> 11) * 0x1.0p-53;
}

template <typename It>
void shuffle(It first, It last, Rng& rng) {
    auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        auto j = rng.below(i);
        std::swap(first[i - 1], first[j]);
    }
}

}  // namespace nettask
