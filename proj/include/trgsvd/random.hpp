#pragma once

#include <cstdint>
#include <span>

namespace trgsvd {

/// SplitMix64 (Steele, Lea and Flood). Fixed and portable so that seeded
/// problems and start vectors are reproducible across platforms and
/// standard libraries, which std::uniform_real_distribution is not.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    void fill_uniform(std::span<double> v, double lo = -1.0, double hi = 1.0) {
        for (double& x : v) x = uniform(lo, hi);
    }

private:
    std::uint64_t state_;
};

}  // namespace trgsvd
