#pragma once

#include <cstdint>
#include <cmath>
#include <complex>

namespace peaklab {

// Deterministic splitmix64 generator. Unlike std distributions, the double
// extraction here is fixed by the standard's integer semantics alone, so
// sample sets are bit-identical across platforms and runs.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform in the open unit disc (rejection from the square).
    std::complex<double> unit_disc() {
        for (;;) {
            double x = uniform(-1.0, 1.0);
            double y = uniform(-1.0, 1.0);
            if (x * x + y * y < 1.0) return {x, y};
        }
    }

    // Uniform on the unit circle.
    std::complex<double> unit_circle() {
        double t = uniform(0.0, 2.0 * M_PI);
        return {std::cos(t), std::sin(t)};
    }

    // Uniform in the closed disc of radius r (boundary has measure zero,
    // rejection from the square is exact enough for sampling purposes).
    std::complex<double> disc(double r) { return r * unit_disc(); }

private:
    std::uint64_t state_;
};

} // namespace peaklab
