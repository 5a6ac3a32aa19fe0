#include "medoidlp/rng.hpp"

#include <cmath>

namespace medoidlp {

double Rng::next_gaussian() {
    if (has_cached_gaussian_) {
        has_cached_gaussian_ = false;
        return cached_gaussian_;
    }
    for (;;) {
        double a = 2.0 * next_double() - 1.0;
        double b = 2.0 * next_double() - 1.0;
        double s = a * a + b * b;
        if (s >= 1.0 || s == 0.0) continue;
        double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_gaussian_ = b * f;
        has_cached_gaussian_ = true;
        return a * f;
    }
}

std::uint32_t Rng::next_below(std::uint32_t bound) {
    // Lemire-style rejection-free-enough bounded draw; bound > 0.
    std::uint64_t x = next_u64() >> 32;
    return static_cast<std::uint32_t>((x * bound) >> 32);
}

} // namespace medoidlp
