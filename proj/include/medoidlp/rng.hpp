#ifndef MEDOIDLP_RNG_HPP
#define MEDOIDLP_RNG_HPP

#include <cstdint>

namespace medoidlp {

/// splitmix64 step: advances the state and returns a mixed 64-bit value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and a stream tag.
/// Used to split one experiment seed into per-trial / per-ball streams.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag) {
    std::uint64_t s = base ^ (0x9e3779b97f4a7c15ULL + tag);
    splitmix64(s);
    return splitmix64(s);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(base, a), b);
}

/// Small deterministic generator (splitmix64 core). Not cryptographic; the
/// point is bit-identical streams for a given seed on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed), has_cached_gaussian_(false), cached_gaussian_(0.0) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]; avoids exact zero for inverse-CDF use.
    double next_double_open_low() {
        return 1.0 - next_double();
    }

    /// Standard normal via the Marsaglia polar method (no libm trig).
    double next_gaussian();

    std::uint32_t next_below(std::uint32_t bound);

private:
    std::uint64_t state_;
    bool has_cached_gaussian_;
    double cached_gaussian_;
};

} // namespace medoidlp

#endif
