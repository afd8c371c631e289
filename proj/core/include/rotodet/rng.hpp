#ifndef ROTODET_RNG_HPP
#define ROTODET_RNG_HPP

#include <cstdint>
#include <cmath>
#include <random>

namespace rotodet {

/// Deterministic random source used everywhere randomness is needed.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; doubles are derived from raw bits directly (never through
/// std::uniform_real_distribution, whose mapping is implementation-defined),
/// so the same seed yields the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Inclusive integer range.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform() * (static_cast<double>(hi) - lo + 1.0));
    }

    /// Standard normal via Box-Muller; generates pairs, caches the spare.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        // keep log() finite
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Stream-independent child seed for item `index`; lets generators hand
    /// each scene/patch its own reproducible stream.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        // splitmix64 finalizer over seed ^ golden-ratio stride
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace rotodet

#endif
