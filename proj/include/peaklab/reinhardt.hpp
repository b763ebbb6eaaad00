#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "peaklab/complex_poly.hpp"
#include "peaklab/hull.hpp"
#include "peaklab/tolerance.hpp"

namespace peaklab::reinhardt {

// Convex polyhedron <l, x> <= l0 rows modeling (a piece of) log D.
// Construction certifies nonempty interior and that every coordinate is
// bounded above, which pins the recession cone inside (R_{<=0})^n.
class LogPolyhedron {
public:
    LogPolyhedron(rmat rows, rvec rhs, const ToleranceProfile& tol = {});

    int dim() const { return dim_; }
    const rmat& rows() const { return rep_.a; }
    const rvec& rhs() const { return rep_.b; }
    const HRep& hrep() const { return rep_; }
    const rvec& interior_point() const { return interior_; }

    bool contains(const rvec& x, double slack = 1e-9) const;
    double max_violation(const rvec& x) const;

    nlohmann::json to_json() const;
    static LogPolyhedron from_json(const nlohmann::json& j, const ToleranceProfile& tol = {});

private:
    HRep rep_;
    rvec interior_;
    int dim_ = 0;
};

// Bounded pseudoconvex Reinhardt domain via its log model: the interior of
// the union of the pieces, plus per-coordinate axis flags.
struct ReinhardtDomain {
    std::vector<LogPolyhedron> pieces;
    std::vector<bool> meets_axes;

    ReinhardtDomain(std::vector<LogPolyhedron> ps, std::vector<bool> axes,
                    const ToleranceProfile& tol = {});

    int dim() const { return pieces.front().dim(); }
    bool log_contains(const rvec& x, double slack = 1e-9) const;

    nlohmann::json to_json() const;
    static ReinhardtDomain from_json(const nlohmann::json& j, const ToleranceProfile& tol = {});
};

struct LaurentMonomial {
    cplx coeff{1.0};
    std::vector<long long> exponent;

    cplx evaluate(const cvec& z) const;
    // log |F(z)| as a function of x = log|z| only.
    double log_modulus(const rvec& x) const;
    nlohmann::json to_json() const;
};

struct SupportFunctional {
    rvec l;
    double l0 = 0.0;
    std::vector<int> perm; // coordinate permutation making the pivot entry last
};

// Audit record of one laurent_peak construction.
struct ConstructionTrace {
    int level = 0;
    rvec l;
    double l0 = 0.0;
    std::vector<int> perm;
    std::optional<LogPolyhedron> face_projection; // inflated G' (permuted coords)
    std::vector<rvec> inflation_vectors;
    std::vector<long long> t_prime;
    double t0 = 0.0;
    double m_used = 0.0;
    std::vector<long long> alpha;
    long long k = 0;
    double theta = 0.0;
    double epsilon = 0.0;
    double n_target = 0.0;
    double u_radius = 0.0;
    std::uint64_t sample_seed = 0;

    nlohmann::json to_json() const;
};

// ---- operations ------------------------------------------------------

rvec log_map(const cvec& z);

// x0 extreme in the closed polyhedron iff the active-row normals span R^n.
bool is_extreme(const HRep& p, const rvec& x0, const ToleranceProfile& tol = {});

// Supporting functional at a boundary point; active unit normals averaged,
// then scaled so the pivot component (moved last by `perm`) has modulus 1.
SupportFunctional support_at(const HRep& p, const rvec& x0, const ToleranceProfile& tol = {});

// Simultaneous Dirichlet approximation: smallest k in 1..mu^n with
// |l_j - alpha_j / k| <= 1/(mu k) for all j.
struct DirichletPair {
    std::vector<long long> alpha;
    long long k = 1;
};
DirichletPair dirichlet(const rvec& l, int mu);

// Laurent-monomial weak peak sequence element at z0 for the domain D.
// The index mu only moves the Dirichlet pair; the supporting data, the
// recursive integer functional and the face inflation are mu-independent,
// so consecutive elements dominate each other pointwise off U.
struct LaurentResult {
    LaurentMonomial monomial;
    ConstructionTrace trace;
};
LaurentResult laurent_peak(const ReinhardtDomain& d, const cvec& z0, int mu, double n_target,
                           double u_radius, const ToleranceProfile& tol = {});

enum class PeakVerdict { Peak, NotPeak };

PeakVerdict classify_peak(const ReinhardtDomain& d, const cvec& z, const ToleranceProfile& tol = {});

// Krein-Milman-with-recession certificate x0 = sum p_j x_j + alpha t0.
struct Decomposition {
    std::vector<rvec> vertices;
    rvec weights;
    rvec alpha;  // unit recession direction (zero vector when t0 = 0)
    double t0 = 0.0;
};
Decomposition decompose(const HRep& p, const rvec& x0, const ToleranceProfile& tol = {});

// Envelope of holomorphy: convex hull of the log model, one convex piece.
ReinhardtDomain envelope(const ReinhardtDomain& d, const ToleranceProfile& tol = {});

// The truncated staircase domain (steps 1..K at depth -n^2-n, one collapsed
// strip at step K+1's level, finite floor) and the w/z probe over it.
ReinhardtDomain example61_domain(int k_steps, const ToleranceProfile& tol = {});
LogPolyhedron example61_step(int n, const ToleranceProfile& tol = {});

struct ExtensionReport {
    int k_steps = 0;
    std::vector<double> step_sampled_sup; // steps 1..K of sampled sup |w/z|
    std::vector<double> step_lp_sup;      // LP oracle per step
    double dk_shell_sampled_sup = 0.0;    // over D_K, |z| <= e^{-(K-1)^2}
    double hull_shell_sampled_sup = 0.0;  // over envelope(D_K), same shell
    double hull_shell_lp_sup = 0.0;
    nlohmann::json to_json() const;
};
ExtensionReport extension_probe(const ReinhardtDomain& dk, const LaurentMonomial& f, int k_steps,
                                const ToleranceProfile& tol = {});

// ---- catalog builders -------------------------------------------------

ReinhardtDomain log_square_domain();        // log D = (-1,0)^2
ReinhardtDomain irrational_slice_domain();  // box(-5,0)^2 cut by x1 + sqrt(2) x2 <= 0
ReinhardtDomain annulus_domain(double lo = -1.0, double hi = 0.0); // 1-D
ReinhardtDomain bidisc_domain();            // log D = (R_{<0})^2

// Deterministic log-space samples of the domain (union of pieces).
std::vector<rvec> sample_log_points(const ReinhardtDomain& d, int count, std::uint64_t seed);
std::vector<rvec> sample_log_points(const LogPolyhedron& p, int count, std::uint64_t seed);

// Closed convex hull of the log model as a single HRep.
HRep log_hull(const ReinhardtDomain& d);

} // namespace peaklab::reinhardt
