#ifndef ARENA_RNG_HPP
#define ARENA_RNG_HPP

#include <cstdint>
#include <random>

namespace arena {

/// Derives independent sub-stream seeds from a root seed and a list of tags
/// (day index, sector index, ...). Hierarchical splitting keeps parallel and
/// serial generation bit-identical: every unit of work seeds its own engine.
inline std::uint64_t split_seed(std::uint64_t seed) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

template <typename... Tags>
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t tag, Tags... rest) {
    return split_seed(split_seed(seed ^ (tag * 0xd1342543de82ef95ULL)), rest...);
}

/// Thin deterministic RNG wrapper used everywhere randomness is needed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(split_seed(seed)) {}

    double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double normal(double mean = 0.0, double sigma = 1.0) {
        return std::normal_distribution<double>(mean, sigma)(engine_);
    }
    /// Mean-one lognormal: exp(sigma*Z - sigma^2/2).
    double lognormal_unit(double sigma) {
        if (sigma <= 0.0) return 1.0;
        return std::exp(normal(0.0, sigma) - 0.5 * sigma * sigma);
    }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return std::uniform_int_distribution<int>(lo, hi)(engine_);
    }
    /// Rademacher +/-1.
    double sign() { return uniform01() < 0.5 ? -1.0 : 1.0; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Uniform direction on the unit sphere in d dimensions (d=1 gives +/-1).
std::vector<double> sample_unit_sphere(Rng& rng, std::size_t d);

}  // namespace arena

#endif
