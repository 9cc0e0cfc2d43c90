// Seeded RNG with a fixed bit-level mapping from engine output to doubles,
// so identical seeds reproduce identical runs on any platform.
#ifndef SIDEWALK_RNG_HPP
#define SIDEWALK_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace sidewalk {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        const auto v = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(gen_()) * range) >> 64);
        return lo + static_cast<int>(v);
    }

    // Standard normal via Box-Muller (no state carried between calls).
    double gaussian() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace sidewalk

#endif
