#include "peaklab/complex_poly.hpp"

#include <algorithm>
#include <cmath>

namespace peaklab {

namespace {

// Fixed irrational rotation (2*pi*(sqrt(2)-1)) applied per index so the
// start configuration has no symmetry a conjugate-symmetric polynomial
// could lock onto.
constexpr double kIrrationalStep = 2.0 * M_PI * 0.41421356237309515;

bool sort_before(const cplx& a, const cplx& b) {
    double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return std::arg(a) < std::arg(b);
}

// Aberth resolves an m-fold root only to ~residual^(1/m). Collapsing each
// iterate cluster to its centroid cancels the leading error term (the
// perturbations average out), and multiplicity-aware Newton steps
// c -> c - m p(c)/p'(c) then converge quadratically. Clusters of genuinely
// distinct roots closer than the threshold lose less accuracy than the
// straddling error they started with.
void polish_clusters(const ComplexPoly& q, cvec& z) {
    const double cluster_eps = 2e-5;
    const std::size_t n = z.size();
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        std::vector<std::size_t> cluster{i};
        for (std::size_t j = i + 1; j < n; ++j)
            if (!done[j] && std::abs(z[j] - z[i]) < cluster_eps) cluster.push_back(j);
        if (cluster.size() == 1) {
            done[i] = true;
            continue;
        }
        cplx center(0.0);
        for (std::size_t idx : cluster) center += z[idx];
        center /= static_cast<double>(cluster.size());
        const double m = static_cast<double>(cluster.size());
        cplx best = center;
        double best_res = std::abs(q.eval(best));
        for (int step = 0; step < 4; ++step) {
            cplx dv = q.deriv_eval(center);
            if (dv == cplx(0.0)) break;
            center -= m * q.eval(center) / dv;
            double res = std::abs(q.eval(center));
            if (res < best_res) {
                best = center;
                best_res = res;
            }
        }
        for (std::size_t idx : cluster) {
            z[idx] = best;
            done[idx] = true;
        }
    }
}

} // namespace

cvec roots(const ComplexPoly& p, const ToleranceProfile& tol, int attempt) {
    tol.validate();
    const int deg = p.degree();

    // Exact zero roots deflate trivially and keep examples like t^3 exact.
    int zero_roots = 0;
    while (zero_roots < deg && p.coeffs[static_cast<std::size_t>(zero_roots)] == cplx(0.0))
        ++zero_roots;
    if (zero_roots == deg) return cvec(static_cast<std::size_t>(deg), cplx(0.0));

    ComplexPoly q(cvec(p.coeffs.begin() + zero_roots, p.coeffs.end()));
    const int n = q.degree();
    cvec z(static_cast<std::size_t>(n));

    if (n == 1) {
        z[0] = -q.coeffs[0];
    } else {
        const double radius = (1.0 + q.max_coeff_magnitude()) * (1.0 + 0.05 * attempt);
        const double offset = 0.5 + 0.7391 * attempt;
        for (int k = 0; k < n; ++k) {
            double theta = 2.0 * M_PI * k / n + kIrrationalStep * k + offset;
            z[static_cast<std::size_t>(k)] = radius * cplx(std::cos(theta), std::sin(theta));
        }

        const double residual_bound = tol.root_converge * (1.0 + q.max_coeff_magnitude());
        bool converged = false;
        for (int iter = 0; iter < tol.max_iterations && !converged; ++iter) {
            double max_residual = 0.0;
            for (int k = 0; k < n; ++k) {
                cplx zk = z[static_cast<std::size_t>(k)];
                cplx pv = q.eval(zk);
                max_residual = std::max(max_residual, std::abs(pv));
                if (pv == cplx(0.0)) continue;
                cplx dv = q.deriv_eval(zk);
                if (dv == cplx(0.0)) {
                    // Stationary start point; nudge deterministically.
                    z[static_cast<std::size_t>(k)] = zk + cplx(1e-6, 1e-6);
                    continue;
                }
                cplx newton = pv / dv;
                cplx repulsion(0.0);
                for (int j = 0; j < n; ++j) {
                    if (j == k) continue;
                    cplx diff = zk - z[static_cast<std::size_t>(j)];
                    if (diff == cplx(0.0)) diff = cplx(1e-12, 1e-12);
                    repulsion += cplx(1.0) / diff;
                }
                cplx denom = cplx(1.0) - newton * repulsion;
                cplx step = (denom == cplx(0.0)) ? newton : newton / denom;
                z[static_cast<std::size_t>(k)] = zk - step;
            }
            if (max_residual <= residual_bound) converged = true;
        }
        if (!converged) {
            // Final residual check: the last sweep may have pushed us inside
            // the target even though the pre-sweep residual was above it.
            double max_residual = 0.0;
            for (const cplx& r : z) max_residual = std::max(max_residual, std::abs(q.eval(r)));
            if (max_residual > residual_bound)
                throw NonConvergence("roots: Aberth-Ehrlich did not reach residual target after " +
                                     std::to_string(tol.max_iterations) + " iterations");
        }
        polish_clusters(q, z);

        // The stopping test saw the pre-sweep state; hold the returned roots
        // to the residual contract, with a Newton touch-up if one drifted.
        for (cplx& r : z) {
            for (int step = 0; step < 3 && std::abs(q.eval(r)) > residual_bound; ++step) {
                cplx dv = q.deriv_eval(r);
                if (dv == cplx(0.0)) break;
                cplx next = r - q.eval(r) / dv;
                if (std::abs(q.eval(next)) >= std::abs(q.eval(r))) break;
                r = next;
            }
        }
    }

    cvec result(z);
    result.insert(result.end(), static_cast<std::size_t>(zero_roots), cplx(0.0));
    std::sort(result.begin(), result.end(), sort_before);
    return result;
}

} // namespace peaklab
