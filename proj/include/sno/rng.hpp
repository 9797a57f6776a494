#pragma once

#include <cstdint>
#include <random>
#include <utility>

namespace sno {

/// Seeded uniform random source. A run owns exactly one; identical seeds
/// reproduce identical draw sequences. Copyable so tests can clone a source
/// and replay its upcoming draws.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    /// Uniform integer in [0, n).
    int uniform_int(int n) {
        return std::uniform_int_distribution<int>(0, n - 1)(engine_);
    }

    double normal(double mean, double stddev) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

    /// Two distinct indices in [0, n), both different from `excluded`.
    /// Requires n >= 3.
    std::pair<int, int> two_distinct_excluding(int n, int excluded) {
        int r1 = excluded;
        while (r1 == excluded) {
            r1 = uniform_int(n);
        }
        int r2 = excluded;
        while (r2 == excluded || r2 == r1) {
            r2 = uniform_int(n);
        }
        return {r1, r2};
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace sno
