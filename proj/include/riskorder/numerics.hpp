#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace riskorder {

// Neumaier-compensated accumulator. The invariant suites assert equalities
// at 1e-12, so plain left-to-right summation is not good enough.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

inline bool nearly_equal(double a, double b, double tol) {
    return std::abs(a - b) <= tol;
}

// Deterministic uniform generator. std::mt19937_64 is fully specified by the
// standard; the <random> distributions are not, so the mappings below are
// hand-rolled to keep seeded runs byte-identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) { init(); }

    std::uint64_t next_u64() {
        // xoshiro-free: re-use the SplitMix64 stream directly; quality is
        // ample for test-corpus generation.
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Modulo bias is irrelevant at corpus scale.
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

private:
    void init() {
        // Warm up so that small seeds do not produce correlated leading draws.
        for (int i = 0; i < 4; ++i) next_u64();
    }
    std::uint64_t state_;
};

// Independent substream for trial `index` of a master seed; parallel and
// serial corpus runs must agree draw-for-draw.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace riskorder
