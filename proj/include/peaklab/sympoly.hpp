#pragma once

#include <cstdint>

#include "peaklab/complex_poly.hpp"
#include "peaklab/holo_function.hpp"
#include "peaklab/sampling.hpp"

namespace peaklab::sympoly {

// Membership of a point relative to the symmetrized polydisc G_n, decided by
// the moduli of the zeros of its characteristic polynomial.
enum class Membership { Interior, Boundary, Exterior };

struct MembershipClass {
    Membership kind = Membership::Exterior;
    // For classify(): max |root|. For costara_classify(): the sup over the
    // lambda grid of the recursive measure (crosses 1 together with the root
    // modulus, but is not numerically equal to it).
    double max_root_modulus = 0.0;
    cvec witness_roots;
    bool pole_flag = false; // costara only: a grid lambda hit the pole
};

struct FracParams {
    int n;
    cplx lambda;
};

// Elementary symmetric image pi_n(lambda).
cvec sym(const cvec& lambda);

// t^n - z1 t^{n-1} + z2 t^{n-2} - ... + (-1)^n zn.
ComplexPoly char_poly(const cvec& z);

// Ground-truth membership oracle via root moduli.
MembershipClass classify(const cvec& z, const ToleranceProfile& tol = {});

// Costara fractional map z~(lambda), dimension n -> n-1.
cvec frac_map(const FracParams& fp, const cvec& z, const ToleranceProfile& tol = {});

// Independent recursive classifier over a deterministic closed-disc lambda
// grid (concentric circles, irrational angular offset so rational-angle
// poles are never hit exactly). Cross-check only, never ground truth.
MembershipClass costara_classify(const cvec& z, int lambda_grid_size,
                                 const ToleranceProfile& tol = {});

SampleSet sample_interior(int n, int count, std::uint64_t seed);
SampleSet sample_boundary(int n, int count, std::uint64_t seed);

// Recursive peak-function construction at a boundary point of G_n.
HoloPtr peak_at(const cvec& a, const ToleranceProfile& tol = {});

// Certified lower bound for the Caratheodory pseudodistance of interior
// points, from chained fractional maps over a torus grid of parameters.
struct CarathBound {
    double mobius = 0.0;
    double poincare = 0.0;
};

CarathBound carath_lb(const cvec& z, const cvec& w, int grid, const ToleranceProfile& tol = {});

} // namespace peaklab::sympoly
