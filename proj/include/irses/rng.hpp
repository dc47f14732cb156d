#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace irses {

// Deterministic 64-bit generator (splitmix64). The seed-to-sequence mapping
// is part of the output-stability contract: for a given seed, the i-th call
// to next() returns mix(seed + (i+1)*0x9E3779B97F4A7C15) where mix is the
// Stafford variant-13 finalizer below. Do not change without bumping the
// file-format notes in the README.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0,1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe as a log() argument.
    double uniform01_open_low() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal pair via Box-Muller. Consumes exactly two draws.
    std::pair<double, double> normal_pair() {
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance) {
        const auto [re, im] = normal_pair();
        const double s = std::sqrt(variance / 2.0);
        return {s * re, s * im};
    }

private:
    std::uint64_t state_;
};

}  // namespace irses
