#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace alertzone {

/// SplitMix64. Small-state generator used for per-walk and per-trial
/// streams where seeding a Mersenne twister per stream would dominate.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Mixes a master seed with a path of stream identifiers, e.g.
/// derive_seed(master, {trial, purpose}).
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = master ^ 0x6a09e667f3bcc909ULL;
    for (std::uint64_t part : path) {
        SplitMix64 mix(h ^ (part * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
        h = mix();
    }
    return h;
}

/// Uniform double in [0, 1) with 53 random bits.
template <class Rng>
double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound). bound must be positive.
template <class Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

}  // namespace alertzone
