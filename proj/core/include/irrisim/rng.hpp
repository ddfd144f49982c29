#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace irrisim {

/**
 * SplitMix64 generator.
 *
 * Chosen for bit-reproducibility across platforms: the whole state is one
 * 64-bit word and every draw is integer arithmetic, so identical seeds give
 * identical streams everywhere. Independent streams are derived from a
 * (seed, tag) pair, one per agent and purpose.
 */
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 1) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Marsaglia polar; the spare value is cached.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Fold a stream tag into a master seed (FNV-1a over the tag, then one mix
/// round). Distinct tags give statistically independent SplitMix64 streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    SplitMix64 mixer(seed ^ h);
    return mixer.next_u64();
}

inline SplitMix64 derive_stream(std::uint64_t seed, std::string_view tag) {
    return SplitMix64(derive_seed(seed, tag));
}

} // namespace irrisim
