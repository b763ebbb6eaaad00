#pragma once

#include "peaklab/errors.hpp"

namespace peaklab {

// Shared numeric tolerances. The ordering root_converge < boundary_band <
// peak_value_tol is load-bearing: root residuals must resolve the membership
// band, and the band must resolve peak values.
struct ToleranceProfile {
    double root_converge = 1e-12;
    double boundary_band = 1e-8;
    double peak_value_tol = 1e-6;
    double lp_feas_tol = 1e-9;
    int max_iterations = 200;

    void validate() const {
        if (root_converge <= 0 || boundary_band <= 0 || peak_value_tol <= 0 ||
            lp_feas_tol <= 0 || max_iterations <= 0) {
            throw DomainViolation("ToleranceProfile: all entries must be strictly positive");
        }
        if (!(root_converge < boundary_band && boundary_band < peak_value_tol)) {
            throw DomainViolation(
                "ToleranceProfile: require root_converge < boundary_band < peak_value_tol");
        }
    }
};

} // namespace peaklab
