#pragma once

#include <cstdint>

#include <json.hpp>

#include "peaklab/holo_function.hpp"
#include "peaklab/hull.hpp"

namespace peaklab::cconvex {

// Bounded convex domain D in C^n as an H-representation in R^{2n} under
// z_j = x_{2j-1} + i x_{2j}. Boundedness and nonempty interior are
// LP-certified at construction.
class ConvexBody {
public:
    ConvexBody(rmat rows, rvec rhs, int complex_dim, const ToleranceProfile& tol = {});

    int complex_dim() const { return n_; }
    int real_dim() const { return 2 * n_; }
    const HRep& hrep() const { return rep_; }
    const rvec& interior_point() const { return interior_; }

    static rvec to_real(const cvec& z);
    static cvec to_complex(const rvec& x);

    double max_violation(const cvec& z) const;
    bool contains(const cvec& z, double slack = 1e-9) const;

    std::vector<cvec> sample_interior(int count, std::uint64_t seed) const;
    // Boundary points by deterministic ray shooting from the interior point.
    std::vector<cvec> sample_boundary(int count, std::uint64_t seed) const;

    nlohmann::json to_json() const;
    static ConvexBody from_json(const nlohmann::json& j, const ToleranceProfile& tol = {});

private:
    HRep rep_;
    rvec interior_;
    int n_ = 0;
};

// Complex normal nu at a boundary point: active real unit normals averaged
// and paired to C^n. The hyperplane <z - a, nu> = 0 misses D because
// Re<z - a, nu> < 0 there.
cvec support_complex(const ConvexBody& b, const cvec& a, const ToleranceProfile& tol = {});

// Weak peak function exp(1/Log(<z - a, nu>/d)) with d a 1%-inflated sampled
// diameter of the projected planar image.
struct WeakPeak {
    HoloPtr phi;
    cvec nu;
    double diameter = 0.0;
};
WeakPeak weak_peak(const ConvexBody& b, const cvec& a, const ToleranceProfile& tol = {});

// Catalog bodies for tests and the CLI.
ConvexBody box_polydisc(int n);                // |Re z_j| <= 1, |Im z_j| <= 1
ConvexBody disc_polygon(int sides);           // circumscribed polygon of the unit disc
ConvexBody ball_approx(int n, int rows, std::uint64_t seed); // tangent cuts + the e_1 cut

} // namespace peaklab::cconvex
