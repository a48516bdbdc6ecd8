#pragma once

#include <cmath>
#include <cstdint>

namespace lsdnet {

// Counter-style generator: the i-th output is mix(seed + i*golden), the
// splitmix64 construction. Chosen over std::mt19937 + <random> distributions
// because the standard does not pin distribution output across library
// implementations; this sequence is bit-stable everywhere.
class CounterRng {
public:
    static constexpr const char* kAlgorithmId = "splitmix64";

    explicit CounterRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Box-Muller; one variate per call (the sine branch is discarded so the
    // stream advances by exactly two uniforms per gaussian).
    double gaussian(double mu, double sigma) {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mu + sigma * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Inverse-CDF logistic variate with location mu and scale s.
    double logistic(double mu, double s) {
        double u = uniform01();
        if (u <= 0.0) u = 0x1.0p-53;  // keep the logit finite
        return mu + s * std::log(u / (1.0 - u));
    }

    // Inverse-CDF exponential variate with the given rate.
    double exponential(double rate) {
        const double u = uniform01();
        return -std::log(1.0 - u) / rate;
    }

private:
    std::uint64_t state_;
};

}  // namespace lsdnet
