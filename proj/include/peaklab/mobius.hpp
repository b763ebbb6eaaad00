#pragma once

#include <cmath>
#include <complex>

#include "peaklab/errors.hpp"

namespace peaklab {

// Moebius pseudodistance |a-b| / |1 - conj(a) b| on the unit disc.
inline double mobius_distance(const std::complex<double>& a, const std::complex<double>& b) {
    if (std::abs(a) >= 1.0 || std::abs(b) >= 1.0)
        throw DomainViolation("mobius_distance: arguments must lie in the open unit disc");
    if (a == b) return 0.0;
    return std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
}

// Poincare scale of the same quantity.
inline double poincare_distance(const std::complex<double>& a, const std::complex<double>& b) {
    return std::atanh(mobius_distance(a, b));
}

} // namespace peaklab
