#pragma once

#include <cstdint>
#include <vector>

#include "peaklab/complex_poly.hpp"
#include "peaklab/rng.hpp"

namespace peaklab {

// A reproducible batch of sample points: regenerating with the same
// (seed, strategy, count) yields bit-identical points.
struct SampleSet {
    enum class Strategy { Interior, Boundary, AnnularShell };

    std::vector<cvec> points;
    std::uint64_t seed = 0;
    Strategy strategy = Strategy::Interior;
};

} // namespace peaklab
